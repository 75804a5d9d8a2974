#include "bdf/invariants.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace bdf {

namespace {

bool is_insert(EventTag t) { return t == EventTag::Min || t == EventTag::CuspL; }
bool is_delete(EventTag t) { return t == EventTag::Max || t == EventTag::CuspR; }

// Remaps a mark gap across removal of an [insert, delete] wiggle whose lower
// insertion position is m.
int wiggle_gap_remap(int gap, int m) {
  if (gap <= m) return gap;
  if (gap == m + 1) return m + 1;
  if (gap == m + 2) return m;
  return gap - 2;
}

}  // namespace

bool commute_events(SlicedDiagram& d, int e) {
  const int E = d.event_count();
  if (e < 0 || e + 1 >= E) return false;
  for (const auto& mk : d.marks)
    if (mk.after_event == e) return false;
  const Event p = d.events[e], q = d.events[e + 1];
  const int P = p.pos, Q = q.pos;
  Event q0 = q, p1 = p;
  auto done = [&]() {
    d.events[e] = q0;
    d.events[e + 1] = p1;
    return true;
  };
  if (p.tag == EventTag::Cross) {
    if (q.tag == EventTag::Cross) {
      if (std::abs(P - Q) < 2) return false;
      return done();
    }
    if (is_insert(q.tag)) {
      if (Q == P + 1) return false;
      if (Q <= P) p1.pos = P + 2;
      return done();
    }
    // delete
    if (Q >= P - 1 && Q <= P + 1) return false;
    if (Q <= P - 2) p1.pos = P - 2;
    return done();
  }
  if (is_insert(p.tag)) {
    if (q.tag == EventTag::Cross) {
      if (Q >= P - 1 && Q <= P + 1) return false;
      if (Q >= P + 2) q0.pos = Q - 2;
      return done();
    }
    if (is_insert(q.tag)) {
      if (Q == P + 1) return false;
      if (Q <= P) {
        p1.pos = P + 2;
      } else {
        q0.pos = Q - 2;
      }
      return done();
    }
    // delete
    if (Q >= P - 1 && Q <= P + 1) return false;
    if (Q >= P + 2) {
      q0.pos = Q - 2;
    } else {
      p1.pos = P - 2;
    }
    return done();
  }
  // p delete
  if (q.tag == EventTag::Cross) {
    if (Q == P - 1) return false;
    if (Q >= P) q0.pos = Q + 2;
    return done();
  }
  if (is_insert(q.tag)) {
    if (Q <= P) {
      p1.pos = P + 2;
    } else {
      q0.pos = Q + 2;
    }
    return done();
  }
  // both deletes
  if (Q == P - 1 || Q == P) return false;
  if (Q >= P + 1) {
    q0.pos = Q + 2;
  } else {
    p1.pos = P - 2;
  }
  return done();
}

bool tip_pass(SlicedDiagram& d, int e) {
  const int E = d.event_count();
  if (e < 0 || e + 1 >= E) return false;
  for (const auto& mk : d.marks)
    if (mk.after_event == e) return false;
  Event& p = d.events[e];
  Event& q = d.events[e + 1];
  // a crossing slides around a smooth extremum tip
  if (p.tag == EventTag::Min && q.tag == EventTag::Cross) {
    if (q.pos == p.pos + 1) {
      p.pos += 1;
      q.pos -= 1;
      return true;
    }
    if (q.pos == p.pos - 1) {
      p.pos -= 1;
      q.pos += 1;
      return true;
    }
    return false;
  }
  if (p.tag == EventTag::Cross && q.tag == EventTag::Max) {
    if (p.pos == q.pos + 1) {
      p.pos -= 1;
      q.pos += 1;
      return true;
    }
    if (p.pos == q.pos - 1) {
      p.pos += 1;
      q.pos -= 1;
      return true;
    }
    return false;
  }
  return false;
}

bool cancel_wiggle(SlicedDiagram& d, int e) {
  const int E = d.event_count();
  if (e < 0 || e + 1 >= E) return false;
  const Event& p = d.events[e];
  const Event& q = d.events[e + 1];
  if (p.tag != EventTag::Min || q.tag != EventTag::Max) return false;
  if (q.pos != p.pos + 1 && q.pos != p.pos - 1) return false;
  // Consistency of the surviving strand is guaranteed by diagram validity;
  // verify signs locally so this is safe on unvalidated inputs.
  RadialSign born_lo = opposite(p.upper), born_hi = p.upper;
  if (q.pos == p.pos + 1) {
    // kills (upper-born, neighbor above); survivor = lower-born
    (void)born_lo;
  } else {
    (void)born_hi;
  }
  int m = std::min(p.pos, q.pos);
  // remap marks
  for (auto& mk : d.marks) {
    if (mk.after_event == e) {
      mk.after_event = e == 0 ? 0 : e - 1;
      mk.gap = wiggle_gap_remap(mk.gap, m);
    } else if (mk.after_event == e + 1) {
      mk.after_event = e == 0 ? 0 : e - 1;
    } else if (mk.after_event > e + 1) {
      mk.after_event -= 2;
    }
  }
  d.events.erase(d.events.begin() + e, d.events.begin() + e + 2);
  if (d.events.empty())
    for (auto& mk : d.marks) mk.after_event = 0;
  return true;
}

SlicedDiagram isotopy_normal_form(const SlicedDiagram& d) {
  SlicedDiagram nf = d;
  bool progress = true;
  int guard = 4 * (nf.event_count() + 2) * (nf.event_count() + 2);
  while (progress && guard-- > 0) {
    progress = false;
    for (int e = 0; e + 1 < nf.event_count(); ++e) {
      if (cancel_wiggle(nf, e)) {
        progress = true;
        break;
      }
    }
    if (progress) continue;
    // try to enable a cancellation by a single commute
    for (int e = 0; e + 1 < nf.event_count() && !progress; ++e) {
      SlicedDiagram trial = nf;
      if (!commute_events(trial, e)) continue;
      for (int f = std::max(0, e - 1); f <= e + 1 && f + 1 < trial.event_count();
           ++f) {
        SlicedDiagram t2 = trial;
        if (cancel_wiggle(t2, f)) {
          nf = t2;
          progress = true;
          break;
        }
      }
    }
  }
  return nf;
}

std::vector<Kink> find_kinks(const SlicedDiagram& d) {
  std::vector<Kink> out;
  Sweep s;
  if (sweep(d, s)) return out;
  const int E = d.event_count();
  for (int e = 0; e + 1 < E; ++e) {
    const Event& p = d.events[e];
    const Event& q = d.events[e + 1];
    if (!is_insert(p.tag) || !is_delete(q.tag)) continue;
    bool pc = p.tag == EventTag::CuspL, qc = q.tag == EventTag::CuspR;
    if (pc == qc) continue;  // exactly one cusp event
    if (q.pos != p.pos + 1 && q.pos != p.pos - 1) continue;
    // born pair occupies (p.pos, p.pos+1) on slice e+1
    int born_lo = s.slices[e + 1][p.pos].token;
    int born_hi = s.slices[e + 1][p.pos + 1].token;
    int die_lo = s.slices[e + 1][q.pos].token;
    int die_hi = s.slices[e + 1][q.pos + 1].token;
    int shared = -1;
    for (int b : {born_lo, born_hi})
      for (int dd : {die_lo, die_hi})
        if (b == dd) shared = b;
    if (shared < 0) continue;
    Kink k;
    k.first_event = e;
    k.second_event = e + 1;
    k.cusp_first = pc;
    k.component = s.token_component[shared];
    out.push_back(k);
  }
  return out;
}

bool is_directed_for_pole(const SlicedDiagram& d, char pole) {
  SlicedDiagram stripped = d;
  stripped.marks.clear();
  SlicedDiagram nf = isotopy_normal_form(stripped);
  Sweep s;
  if (sweep(nf, s)) return false;
  RadialSign want =
      pole == 'N' ? RadialSign::TowardSouth : RadialSign::TowardNorth;

  auto kinks = find_kinks(nf);
  std::set<int> kink_events;
  std::set<int> internal_tokens;
  for (const auto& k : kinks) {
    kink_events.insert(k.first_event);
    kink_events.insert(k.second_event);
    // internal token = shared between born and dying pair: lives only on the
    // single interval between the two events.
    const Event& p = nf.events[k.first_event];
    const Event& q = nf.events[k.second_event];
    int bl = s.slices[k.first_event + 1][p.pos].token;
    int bh = s.slices[k.first_event + 1][p.pos + 1].token;
    int dl = s.slices[k.first_event + 1][q.pos].token;
    int dh = s.slices[k.first_event + 1][q.pos + 1].token;
    for (int b : {bl, bh})
      for (int dd : {dl, dh})
        if (b == dd) internal_tokens.insert(b);
  }
  for (int e = 0; e < nf.event_count(); ++e) {
    if (nf.events[e].tag == EventTag::Cross) continue;
    if (!kink_events.count(e)) return false;
  }
  for (int t = 0; t < static_cast<int>(s.token_attr.size()); ++t) {
    const StrandAttr& a = s.token_attr[t];
    if (a.kind == StrandKind::Definite) continue;
    if (internal_tokens.count(t)) continue;
    if (a.sign != want) return false;
  }
  return true;
}

TrisectionResult trisection_params(const SlicedDiagram& d) {
  TrisectionResult res;
  Sweep s;
  if (sweep(d, s)) {
    res.error = TrisectionError::NotATrisection;
    return res;
  }
  // exactly one definite circle, at a slice extreme
  int defs = 0, def_index = -1;
  for (int j = 0; j < d.width_at_start(); ++j)
    if (d.base[j].kind == StrandKind::Definite) {
      defs++;
      def_index = j;
    }
  if (defs != 1 ||
      (def_index != 0 && def_index != d.width_at_start() - 1)) {
    res.error = TrisectionError::NotATrisection;
    return res;
  }
  char center = def_index == 0 ? 'N' : 'S';  // circles nest toward this pole
  if (!is_directed_for_pole(d, center) ||
      !std::all_of(d.events.begin(), d.events.end(), [](const Event& e) {
        return e.tag != EventTag::Cross;
      })) {
    res.error = TrisectionError::NotATrisection;
    return res;
  }
  // every indefinite component winds and is a single base strand
  std::vector<int> comp_of_base;
  for (int j = 0; j < d.width_at_start(); ++j)
    if (d.base[j].kind == StrandKind::Indefinite)
      comp_of_base.push_back(s.token_component[j]);
  std::set<int> distinct(comp_of_base.begin(), comp_of_base.end());
  if (static_cast<int>(distinct.size()) != s.component_count ||
      static_cast<int>(comp_of_base.size()) != s.component_count) {
    res.error = TrisectionError::NotATrisection;
    return res;
  }
  // cusp census: 3 on an innermost block, 0 elsewhere
  // order components from outer (near the definite circle) to inner
  std::vector<int> ordered = comp_of_base;
  if (center == 'S') std::reverse(ordered.begin(), ordered.end());
  // ordered now runs from outermost to innermost
  int gprime = static_cast<int>(ordered.size());
  int cusp_free = 0;
  int i = 0;
  for (; i < gprime && s.component_cusps[ordered[i]] == 0; ++i) cusp_free++;
  for (; i < gprime; ++i)
    if (s.component_cusps[ordered[i]] != 3) {
      res.error = TrisectionError::NotATrisection;
      return res;
    }
  // the cap beyond the definite circle is outside the image: empty fiber
  const FiberClass beyond = center == 'N' ? s.region_fiber[s.south_region]
                                          : s.region_fiber[s.north_region];
  if (beyond.components != 0) {
    res.error = TrisectionError::NotATrisection;
    return res;
  }
  // sector balance: cusp events in cyclic order split into three blocks each
  // containing every cusped component once
  int c = gprime - cusp_free;
  if (c > 0) {
    std::vector<int> word;
    for (int e = 0; e < d.event_count(); ++e) {
      EventTag t = d.events[e].tag;
      if (t == EventTag::CuspL) {
        word.push_back(s.token_component[s.slices[e + 1][d.events[e].pos].token]);
      } else if (t == EventTag::CuspR) {
        word.push_back(s.token_component[s.slices[e][d.events[e].pos].token]);
      }
    }
    if (static_cast<int>(word.size()) != 3 * c) {
      res.error = TrisectionError::SectorMismatch;
      return res;
    }
    bool ok = false;
    int n = 3 * c;
    for (int r = 0; r < n && !ok; ++r) {
      bool good = true;
      for (int blk = 0; blk < 3 && good; ++blk) {
        std::set<int> seen;
        for (int j = 0; j < c; ++j)
          seen.insert(word[(r + blk * c + j) % n]);
        if (static_cast<int>(seen.size()) != c) good = false;
      }
      if (good) ok = true;
    }
    if (!ok) {
      res.error = TrisectionError::SectorMismatch;
      return res;
    }
  }
  res.params = TrisectionParams{gprime, cusp_free};
  return res;
}

std::optional<bool> untwisted_parity_check(const SlicedDiagram& d) {
  Sweep s;
  if (sweep(d, s)) return std::nullopt;
  auto b1 = d.meta.get_int("b1");
  auto b2p = d.meta.get_int("b2plus");
  if (!b1 || !b2p) return std::nullopt;
  int untwisted = 0;
  for (int c = 0; c < s.component_count; ++c) {
    if (s.component_cusps[c] > 0) return std::nullopt;
    if (!s.component_twist[c]) return std::nullopt;
    if (*s.component_twist[c] == Twist::Untwisted) untwisted++;
  }
  return (untwisted % 2) == ((1 + *b1 + *b2p) % 2);
}

InvariantReport classify(const SlicedDiagram& d) {
  InvariantReport r;
  Sweep s;
  if (sweep(d, s)) return r;
  r.chi = euler_characteristic(d, s);
  r.round_components = s.component_count;
  r.lefschetz_count = static_cast<int>(d.marks.size());
  r.definite_circles = s.definite_count;
  for (const auto& e : d.events) {
    if (e.tag == EventTag::Cross) r.crossing_count++;
    if (e.tag == EventTag::CuspL || e.tag == EventTag::CuspR) r.cusp_count++;
  }
  const FiberClass south = s.region_fiber[s.south_region];
  const FiberClass north = s.region_fiber[s.north_region];
  auto genus_of = [](const FiberClass& f) -> std::optional<int> {
    if (f.components != 1) return std::nullopt;
    return (2 - f.euler) / 2;
  };
  auto gs = genus_of(south), gn = genus_of(north);
  if (gs && gn) {
    r.genus_high = std::max(*gs, *gn);
    r.genus_low = std::min(*gs, *gn);
  } else if (gs) {
    r.genus_high = r.genus_low = gs;
  } else if (gn) {
    r.genus_high = r.genus_low = gn;
  }

  bool dn = is_directed_for_pole(d, 'N');
  bool ds = is_directed_for_pole(d, 'S');
  r.is_directed = dn || ds;
  if (dn) r.directed_pole = 'N';
  else if (ds) r.directed_pole = 'S';

  r.is_embedded = r.crossing_count == 0;

  r.is_fiber_connected = true;
  for (int t = 0; t < d.interval_count() && r.is_fiber_connected; ++t) {
    const auto& sl = d.event_count() == 0 ? s.slices[0] : s.slices[t + 1];
    for (int b = 0; b < static_cast<int>(s.regions[t].size()); ++b) {
      const FiberClass& f = s.region_fiber[s.regions[t][b]];
      if (f.components == 1) continue;
      if (f.components != 0) {
        r.is_fiber_connected = false;
        break;
      }
      // empty region: must be fenced off by definite folds
      bool fenced = true;
      if (b > 0 && sl[b - 1].attr.kind != StrandKind::Definite) fenced = false;
      if (b < static_cast<int>(sl.size()) &&
          sl[b].attr.kind != StrandKind::Definite)
        fenced = false;
      if (!fenced) {
        r.is_fiber_connected = false;
        break;
      }
    }
  }

  // simplified BLF: directed, embedded, fiber-connected, round locus
  // connected (l <= 1), no cusps, no definite folds, marks on the higher side
  r.is_simplified_blf = r.is_directed && r.is_embedded && r.is_fiber_connected &&
                        r.round_components <= 1 && r.cusp_count == 0 &&
                        r.definite_circles == 0;
  if (r.is_simplified_blf && !d.marks.empty()) {
    int min_euler = s.region_fiber[0].euler;
    for (const auto& f : s.region_fiber) min_euler = std::min(min_euler, f.euler);
    for (const auto& m : d.marks) {
      if (s.region_fiber[s.regions[m.after_event][m.gap]].euler != min_euler) {
        r.is_simplified_blf = false;
        break;
      }
    }
  }

  auto tri = trisection_params(d);
  if (tri.params) {
    r.is_simplified_trisection = true;
    r.trisection = tri.params;
  }

  int untw = 0;
  bool have_twists = s.component_count > 0;
  for (int c = 0; c < s.component_count; ++c) {
    if (s.component_cusps[c] > 0 || !s.component_twist[c]) {
      have_twists = false;
      break;
    }
    if (*s.component_twist[c] == Twist::Untwisted) untw++;
  }
  if (have_twists) r.untwisted_parity = untw % 2;
  return r;
}

}  // namespace bdf

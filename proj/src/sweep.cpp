#include "bdf/diagram.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace bdf {

std::optional<int> Metadata::get_int(const std::string& k) const {
  auto v = get(k);
  if (!v) return std::nullopt;
  try {
    return std::stoi(*v);
  } catch (...) {
    return std::nullopt;
  }
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].rule;
    if (issues[i].event >= 0) os << " @event " << issues[i].event;
    if (!issues[i].detail.empty()) os << " (" << issues[i].detail << ")";
  }
  return os.str();
}

int slice_width_after(const SlicedDiagram& d, int k) {
  int w = d.width_at_start();
  for (int e = 0; e < k && e < d.event_count(); ++e) {
    switch (d.events[e].tag) {
      case EventTag::Min:
      case EventTag::CuspL: w += 2; break;
      case EventTag::Max:
      case EventTag::CuspR: w -= 2; break;
      case EventTag::Cross: break;
    }
  }
  return w;
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Fiber transform for crossing strand `a` northward (from band j to j+1).
bool cross_north(const StrandAttr& a, const FiberClass& in, FiberClass& out) {
  out = in;
  bool with_arrow;
  if (a.kind == StrandKind::Definite) {
    // sign holds the collapse direction; collapsing kills a sphere component.
    with_arrow = (a.sign == RadialSign::TowardNorth);
    if (with_arrow) {
      out.euler -= 2;
      out.components -= 1;
    } else {
      out.euler += 2;
      out.components += 1;
    }
    return out.components >= 0;
  }
  with_arrow = (a.sign == RadialSign::TowardNorth);
  if (with_arrow) {
    out.euler += 2;
    if (a.effect == ComponentEffect::Separating) out.components += 1;
  } else {
    out.euler -= 2;
    if (a.effect == ComponentEffect::Separating) out.components -= 1;
  }
  return out.components >= 0;
}

}  // namespace

std::optional<SweepError> sweep(const SlicedDiagram& d, Sweep& out) {
  out = Sweep{};
  const int E = d.event_count();
  const int T = d.interval_count();

  // --- token simulation ------------------------------------------------
  int next_token = 0;
  std::vector<SweepStrand> cur;
  for (const auto& a : d.base) {
    cur.push_back({next_token++, a});
    out.token_attr.push_back(a);
  }
  out.slices.push_back(cur);

  // connectivity edges between tokens (tips and closure)
  std::vector<std::pair<int, int>> joins;
  std::vector<std::pair<int, int>> cusp_tokens;  // tokens at each cusp event
  struct TipInfo { int event; bool insert; };

  for (int k = 0; k < E; ++k) {
    const Event& ev = d.events[k];
    const int W = static_cast<int>(cur.size());
    auto err = [&](const std::string& rule, const std::string& det) {
      return SweepError{rule, k, det};
    };
    switch (ev.tag) {
      case EventTag::Cross: {
        if (ev.pos < 0 || ev.pos + 1 >= W)
          return err("event position bounds", "cross " + std::to_string(ev.pos));
        if (cur[ev.pos].attr.kind == StrandKind::Definite ||
            cur[ev.pos + 1].attr.kind == StrandKind::Definite)
          return err("event on definite strand", "cross");
        std::swap(cur[ev.pos], cur[ev.pos + 1]);
        break;
      }
      case EventTag::Min:
      case EventTag::CuspL: {
        if (ev.pos < 0 || ev.pos > W)
          return err("event position bounds", "insert " + std::to_string(ev.pos));
        StrandAttr lo, hi;
        lo.kind = hi.kind = StrandKind::Indefinite;
        if (ev.tag == EventTag::CuspL) {
          lo.sign = RadialSign::TowardSouth;
          hi.sign = RadialSign::TowardNorth;
        } else {
          hi.sign = ev.upper;
          lo.sign = opposite(ev.upper);
        }
        SweepStrand slo{next_token++, lo}, shi{next_token++, hi};
        out.token_attr.push_back(lo);
        out.token_attr.push_back(hi);
        cur.insert(cur.begin() + ev.pos, {slo, shi});
        joins.emplace_back(slo.token, shi.token);
        if (ev.tag == EventTag::CuspL)
          cusp_tokens.emplace_back(slo.token, shi.token);
        break;
      }
      case EventTag::Max:
      case EventTag::CuspR: {
        if (ev.pos < 0 || ev.pos + 1 >= W)
          return err("event position bounds", "delete " + std::to_string(ev.pos));
        const SweepStrand& lo = cur[ev.pos];
        const SweepStrand& hi = cur[ev.pos + 1];
        if (lo.attr.kind == StrandKind::Definite ||
            hi.attr.kind == StrandKind::Definite)
          return err("event on definite strand", "delete");
        if (lo.attr.sign == hi.attr.sign)
          return err("sign propagation",
                     "extremum branches must carry opposite signs");
        if (ev.tag == EventTag::CuspR) {
          if (lo.attr.sign != RadialSign::TowardSouth)
            return err("sign propagation",
                       "cusp branches must point away from the wedge");
        } else {
          if (hi.attr.sign != ev.upper)
            return err("sign propagation", "max upper sign mismatch");
        }
        joins.emplace_back(lo.token, hi.token);
        if (ev.tag == EventTag::CuspR)
          cusp_tokens.emplace_back(lo.token, hi.token);
        cur.erase(cur.begin() + ev.pos, cur.begin() + ev.pos + 2);
        break;
      }
    }
    out.slices.push_back(cur);
  }

  // closure
  if (static_cast<int>(cur.size()) != d.width_at_start())
    return SweepError{"sweep closure", E - 1, "slice width does not close"};
  for (int j = 0; j < static_cast<int>(cur.size()); ++j) {
    if (cur[j].attr.kind != d.base[j].kind || cur[j].attr.sign != d.base[j].sign)
      return SweepError{"sweep closure", E - 1,
                        "strand " + std::to_string(j) + " attrs do not close"};
    joins.emplace_back(cur[j].token, d.base[j].token);
  }

  // --- round-locus components ------------------------------------------
  const int NT = next_token;
  UnionFind tuf(NT);
  for (auto [a, b] : joins) tuf.unite(a, b);
  std::vector<int> comp_of(NT, -1);
  int ncomp = 0;
  for (int t = 0; t < NT; ++t) {
    if (out.token_attr[t].kind == StrandKind::Definite) continue;
    int r = tuf.find(t);
    if (comp_of[r] < 0) comp_of[r] = ncomp++;
  }
  out.token_component.assign(NT, -1);
  for (int t = 0; t < NT; ++t) {
    if (out.token_attr[t].kind == StrandKind::Definite) continue;
    out.token_component[t] = comp_of[tuf.find(t)];
  }
  out.component_count = ncomp;
  out.component_cusps.assign(ncomp, 0);
  for (auto [a, b] : cusp_tokens) {
    (void)b;
    out.component_cusps[out.token_component[a]]++;
  }
  out.component_effect.assign(ncomp, ComponentEffect::Nonseparating);
  out.component_twist.assign(ncomp, std::nullopt);
  std::vector<bool> eff_set(ncomp, false);
  // only base strands carry stored attributes; born strands inherit
  for (int t = 0; t < d.width_at_start(); ++t) {
    int c = out.token_component[t];
    if (c < 0) continue;
    const StrandAttr& a = out.token_attr[t];
    if (!eff_set[c]) {
      out.component_effect[c] = a.effect;
      eff_set[c] = true;
    } else if (out.component_effect[c] != a.effect) {
      return SweepError{"component effect constancy", -1,
                        "component " + std::to_string(c)};
    }
    if (a.twist) {
      if (out.component_twist[c] && *out.component_twist[c] != *a.twist)
        return SweepError{"component twist constancy", -1,
                          "component " + std::to_string(c)};
      out.component_twist[c] = a.twist;
    }
  }
  out.component_winding.assign(ncomp, false);
  for (int j = 0; j < d.width_at_start(); ++j)
    if (d.base[j].kind == StrandKind::Indefinite)
      out.component_winding[out.token_component[j]] = true;

  // event-born strands inherit their component's attributes before labeling
  for (int t = 0; t < NT; ++t) {
    int c = out.token_component[t];
    if (c < 0) continue;
    out.token_attr[t].effect = out.component_effect[c];
    out.token_attr[t].twist = out.component_twist[c];
  }
  for (auto& sl : out.slices)
    for (auto& s : sl) s.attr = out.token_attr[s.token];
  out.definite_count = 0;
  for (const auto& s : d.base)
    if (s.kind == StrandKind::Definite) out.definite_count++;

  // --- region partition --------------------------------------------------
  // node(t, b): interval t in 0..T-1 carries slice islice(t); bands 0..W_t.
  auto islice = [&](int t) -> const std::vector<SweepStrand>& {
    if (E == 0) return out.slices[0];
    return out.slices[t + 1];
  };
  std::vector<int> base_node(T + 1, 0);
  int total_nodes = 0;
  for (int t = 0; t < T; ++t) {
    base_node[t] = total_nodes;
    total_nodes += static_cast<int>(islice(t).size()) + 1;
  }
  base_node[T] = total_nodes;
  auto node = [&](int t, int b) { return base_node[t] + b; };
  UnionFind ruf(total_nodes);

  if (E > 0) {
    for (int k = 0; k < E; ++k) {
      int west = (k - 1 + T) % T;
      int east = k;
      const Event& ev = d.events[k];
      int Ww = static_cast<int>(islice(west).size());
      int i = ev.pos;
      switch (ev.tag) {
        case EventTag::Cross:
          for (int b = 0; b <= Ww; ++b)
            if (b != i + 1) ruf.unite(node(west, b), node(east, b));
          break;
        case EventTag::Min:
        case EventTag::CuspL:
          for (int b = 0; b <= i; ++b) ruf.unite(node(west, b), node(east, b));
          ruf.unite(node(west, i), node(east, i + 2));
          for (int b = i + 1; b <= Ww; ++b)
            ruf.unite(node(west, b), node(east, b + 2));
          break;
        case EventTag::Max:
        case EventTag::CuspR:
          for (int b = 0; b <= i; ++b) ruf.unite(node(west, b), node(east, b));
          ruf.unite(node(west, i + 2), node(east, i));
          for (int b = i + 3; b <= Ww; ++b)
            ruf.unite(node(west, b), node(east, b - 2));
          break;
      }
    }
  }
  // polar caps
  for (int t = 1; t < T; ++t) {
    ruf.unite(node(0, 0), node(t, 0));
    ruf.unite(node(0, static_cast<int>(islice(0).size())),
              node(t, static_cast<int>(islice(t).size())));
  }

  std::vector<int> region_of(total_nodes, -1);
  int nreg = 0;
  for (int n = 0; n < total_nodes; ++n) {
    int r = ruf.find(n);
    if (region_of[r] < 0) region_of[r] = nreg++;
  }
  out.regions.assign(T, {});
  for (int t = 0; t < T; ++t) {
    int W = static_cast<int>(islice(t).size());
    out.regions[t].resize(W + 1);
    for (int b = 0; b <= W; ++b)
      out.regions[t][b] = region_of[ruf.find(node(t, b))];
  }
  out.region_count = nreg;
  out.south_region = out.regions[0][0];
  out.north_region = out.regions[0].back();

  // --- fiber labels -------------------------------------------------------
  out.region_fiber.assign(nreg, FiberClass{});
  std::vector<bool> labeled(nreg, false);
  out.region_fiber[out.south_region] = d.seed;
  labeled[out.south_region] = true;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int t = 0; t < T; ++t) {
      const auto& sl = islice(t);
      for (int j = 0; j < static_cast<int>(sl.size()); ++j) {
        int rs = out.regions[t][j], rn = out.regions[t][j + 1];
        FiberClass f;
        if (labeled[rs] && !labeled[rn]) {
          if (!cross_north(sl[j].attr, out.region_fiber[rs], f))
            return SweepError{"fiber labels", -1, "negative component count"};
          out.region_fiber[rn] = f;
          labeled[rn] = true;
          progress = true;
        } else if (labeled[rs] && labeled[rn]) {
          if (!cross_north(sl[j].attr, out.region_fiber[rs], f) ||
              !(f == out.region_fiber[rn]))
            return SweepError{"fiber labels", -1,
                              "inconsistent propagation around a cycle"};
        }
      }
    }
  }
  for (int r = 0; r < nreg; ++r) {
    if (!labeled[r])
      return SweepError{"fiber labels", -1, "unreachable region"};
    const FiberClass& f = out.region_fiber[r];
    if (f.components < 0 || (f.components == 0 && f.euler != 0))
      return SweepError{"fiber labels", -1, "invalid fiber class"};
  }

  // --- compactly supported Euler characteristics --------------------------
  out.region_chi_c.assign(nreg, 0);
  if (E == 0) {
    int W = d.width_at_start();
    if (W == 0) {
      out.region_chi_c[out.regions[0][0]] = 2;
    } else {
      // caps are disks, middle bands annuli
      out.region_chi_c[out.regions[0][0]] += 1;
      out.region_chi_c[out.regions[0][W]] += 1;
    }
  } else {
    for (int t = 0; t < T; ++t)
      for (int b = 0; b < static_cast<int>(out.regions[t].size()); ++b)
        out.region_chi_c[out.regions[t][b]] += 1;  // open rectangles
    for (int k = 0; k < E; ++k) {
      int west = (k - 1 + T) % T;
      int east = k;
      const Event& ev = d.events[k];
      int i = ev.pos;
      // wall gap 1-cells: one per band except the one touching the wall only
      // at the event point.
      switch (ev.tag) {
        case EventTag::Cross: {
          int W = static_cast<int>(islice(east).size());
          for (int b = 0; b <= W; ++b)
            if (b != i + 1)
              out.region_chi_c[out.regions[east][b]] -= 1;
          break;
        }
        case EventTag::Min:
        case EventTag::CuspL: {
          int W = static_cast<int>(islice(east).size());
          for (int b = 0; b <= W; ++b)
            if (b != i + 1) out.region_chi_c[out.regions[east][b]] -= 1;
          break;
        }
        case EventTag::Max:
        case EventTag::CuspR: {
          int W = static_cast<int>(islice(west).size());
          for (int b = 0; b <= W; ++b)
            if (b != i + 1) out.region_chi_c[out.regions[west][b]] -= 1;
          break;
        }
      }
    }
    out.region_chi_c[out.regions[0][0]] += 1;          // south pole 0-cell
    out.region_chi_c[out.regions[0].back()] += 1;      // north pole 0-cell
  }
  return std::nullopt;
}

std::vector<RegionEdge> region_adjacency(const SlicedDiagram& d,
                                         const Sweep& s) {
  std::set<std::pair<int, int>> seen;
  std::vector<RegionEdge> edges;
  const int T = d.interval_count();
  for (int t = 0; t < T; ++t) {
    const auto& sl = d.event_count() == 0 ? s.slices[0] : s.slices[t + 1];
    for (int j = 0; j < static_cast<int>(sl.size()); ++j) {
      int rs = s.regions[t][j], rn = s.regions[t][j + 1];
      int hs = s.region_fiber[rs].euler <= s.region_fiber[rn].euler ? rs : rn;
      int lo = hs == rs ? rn : rs;
      if (seen.insert({hs, lo}).second) edges.push_back({hs, lo});
    }
  }
  return edges;
}

int Sweep::marks_in(int region, const SlicedDiagram& d) const {
  int n = 0;
  for (const auto& m : d.marks) {
    int t = m.after_event;
    if (t >= 0 && t < static_cast<int>(regions.size()) &&
        m.gap >= 0 && m.gap < static_cast<int>(regions[t].size()) &&
        regions[t][m.gap] == region)
      n++;
  }
  return n;
}

int euler_characteristic(const SlicedDiagram& d, const Sweep& s) {
  const int E = d.event_count();
  const int T = d.interval_count();
  auto fib = [&](int t, int b) { return s.region_fiber[s.regions[t][b]]; };

  long chi = 0;
  // regions, with marks removed as punctures
  std::vector<int> punct(s.region_count, 0);
  for (const auto& m : d.marks) punct[s.regions[m.after_event][m.gap]]++;
  for (int r = 0; r < s.region_count; ++r)
    chi += static_cast<long>(s.region_chi_c[r] - punct[r]) *
           s.region_fiber[r].euler;
  // marks: singular nodal fiber over each
  for (const auto& m : d.marks)
    chi += fib(m.after_event, m.gap).euler + 1;

  if (E == 0) return static_cast<int>(chi);  // vertex-free circles contribute 0

  auto arc_fiber = [&](const StrandAttr& a, int t, int j) {
    int lo = fib(t, j).euler, hi = fib(t, j + 1).euler;
    if (a.kind == StrandKind::Definite) return std::max(lo, hi) - 1;
    return std::min(lo, hi) + 1;
  };

  // strand pieces: -1 each; wall pass-through points and Min/Max tips: +1
  for (int t = 0; t < T; ++t) {
    const auto& sl = s.slices[t + 1];
    for (int j = 0; j < static_cast<int>(sl.size()); ++j)
      chi -= arc_fiber(sl[j].attr, t, j);
  }
  for (int k = 0; k < E; ++k) {
    int west = (k - 1 + T) % T;
    const Event& ev = d.events[k];
    const auto& wsl = s.slices[west + 1];
    int i = ev.pos;
    // pass-through strands at this wall
    for (int j = 0; j < static_cast<int>(wsl.size()); ++j) {
      bool involved = false;
      switch (ev.tag) {
        case EventTag::Cross: involved = (j == i || j == i + 1); break;
        case EventTag::Max:
        case EventTag::CuspR: involved = (j == i || j == i + 1); break;
        case EventTag::Min:
        case EventTag::CuspL: involved = false; break;
      }
      if (!involved) chi += arc_fiber(wsl[j].attr, west, j);
    }
    switch (ev.tag) {
      case EventTag::Min: {
        // smooth tip: interior point of an arc
        chi += arc_fiber(s.slices[k + 1][i].attr, k, i);
        break;
      }
      case EventTag::Max: {
        chi += arc_fiber(wsl[i].attr, west, i);
        break;
      }
      case EventTag::CuspL: {
        int wedge = fib(k, i + 1).euler;
        chi += wedge + 2;
        break;
      }
      case EventTag::CuspR: {
        int wedge = fib(west, i + 1).euler;
        chi += wedge + 2;
        break;
      }
      case EventTag::Cross: {
        int q = std::min(std::min(fib(west, i).euler, fib(west, i + 2).euler),
                         std::min(fib(west, i + 1).euler, fib(k, i + 1).euler));
        chi += q + 2;
        break;
      }
    }
  }
  return static_cast<int>(chi);
}

int euler_characteristic(const SlicedDiagram& d) {
  Sweep s;
  auto err = sweep(d, s);
  if (err) throw std::runtime_error("euler_characteristic: " + err->rule +
                                    ": " + err->detail);
  return euler_characteristic(d, s);
}

ValidationReport validate(const SlicedDiagram& d) {
  ValidationReport rep;
  auto fail = [&](const std::string& rule, int ev, const std::string& det) {
    rep.ok = false;
    rep.issues.push_back({rule, ev, det});
  };

  std::set<int> ids;
  for (const auto& s : d.base)
    if (!ids.insert(s.id).second) fail("distinct strand ids", -1, "");

  // marks bounds
  const int T = d.interval_count();
  for (const auto& m : d.marks) {
    if (m.after_event < 0 || m.after_event >= T) {
      fail("mark anchor bounds", -1, "after_event");
      continue;
    }
    int w = slice_width_after(d, m.after_event + (d.event_count() ? 1 : 0));
    if (m.gap < 0 || m.gap > w) fail("mark gap bounds", -1, "gap");
  }
  if (!rep.ok) return rep;

  Sweep s;
  auto err = sweep(d, s);
  if (err) {
    fail(err->rule, err->event, err->detail);
    return rep;
  }

  // twist only on cusp-free components
  for (int c = 0; c < s.component_count; ++c)
    if (s.component_twist[c] && s.component_cusps[c] > 0)
      fail("twist on cusped component", -1, "component " + std::to_string(c));

  // empty fiber only beyond a definite circle: any region with components==0
  // must have euler 0 (checked in sweep) — nothing more here.
  return rep;
}

}  // namespace bdf

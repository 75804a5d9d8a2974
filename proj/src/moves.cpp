#include "bdf/moves.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace bdf {

namespace {

struct NameEntry {
  MoveKind kind;
  const char* name;
  Legality leg;
};

constexpr NameEntry kNames[] = {
    {MoveKind::Birth, "birth", Legality::AlwaysRealizable},
    {MoveKind::Death, "death", Legality::AlwaysRealizable},
    {MoveKind::Flip, "flip", Legality::AlwaysRealizable},
    {MoveKind::Unflip, "unflip", Legality::AlwaysRealizable},
    {MoveKind::CuspMerge, "cusp_merge", Legality::Conditional},
    {MoveKind::FoldMerge, "fold_merge", Legality::Gated},
    {MoveKind::Sink, "sink", Legality::Gated},
    {MoveKind::Unsink, "unsink", Legality::AlwaysRealizable},
    {MoveKind::Wrinkle, "wrinkle", Legality::AlwaysRealizable},
    {MoveKind::Unwrinkle, "unwrinkle", Legality::Gated},
    {MoveKind::Push, "push", Legality::AlwaysRealizable},
    {MoveKind::Pull, "pull", Legality::Gated},
    {MoveKind::R2u0, "r2u0", Legality::AlwaysRealizable},
    {MoveKind::R2u1, "r2u1", Legality::AlwaysRealizable},
    {MoveKind::R2u2, "r2u2", Legality::Gated},
    {MoveKind::R2d0, "r2d0", Legality::Gated},
    {MoveKind::R2d1, "r2d1", Legality::Gated},
    {MoveKind::R2d2, "r2d2", Legality::AlwaysRealizable},
    {MoveKind::R3d0, "r3d0", Legality::Gated},
    {MoveKind::R3d1, "r3d1", Legality::Gated},
    {MoveKind::R3d2, "r3d2", Legality::AlwaysRealizable},
    {MoveKind::R3d3, "r3d3", Legality::AlwaysRealizable},
    {MoveKind::CMove, "cmove", Legality::AlwaysRealizable},
    {MoveKind::CInverse, "cinverse", Legality::Gated},
    {MoveKind::FlipAndSlip, "flip_and_slip", Legality::AlwaysRealizable},
    {MoveKind::Exchange, "exchange", Legality::Conditional},
    {MoveKind::CrissCross, "criss_cross", Legality::Conditional},
    {MoveKind::DefiniteFlipAndSlip, "definite_flip_and_slip",
     Legality::AlwaysRealizable},
    {MoveKind::KinkRemoval, "kink_removal", Legality::AlwaysRealizable},
    {MoveKind::IsotopyCommute, "isotopy_commute", Legality::AlwaysRealizable},
    {MoveKind::IsotopyCancelPair, "isotopy_cancel_pair",
     Legality::AlwaysRealizable},
    {MoveKind::IsotopyPoleSlide, "isotopy_pole_slide",
     Legality::AlwaysRealizable},
};

const NameEntry& entry(MoveKind m) {
  for (const auto& e : kNames)
    if (e.kind == m) return e;
  return kNames[0];
}

}  // namespace

Legality legality(MoveKind m) { return entry(m).leg; }
const char* move_name(MoveKind m) { return entry(m).name; }

std::optional<MoveKind> move_from_name(const std::string& s) {
  for (const auto& e : kNames)
    if (s == e.name) return e.kind;
  return std::nullopt;
}

bool is_composite(MoveKind m) {
  switch (m) {
    case MoveKind::R3d2:
    case MoveKind::FlipAndSlip:
    case MoveKind::Exchange:
    case MoveKind::CrissCross:
    case MoveKind::DefiniteFlipAndSlip:
    case MoveKind::KinkRemoval:
      return true;
    default:
      return false;
  }
}

std::vector<MoveKind> expand_composite(MoveKind m, int unsinks) {
  using K = MoveKind;
  switch (m) {
    case K::R3d2:
      return {K::R2u0, K::R3d3, K::R2d2};
    case K::Exchange:
      return {K::Flip, K::Flip, K::CuspMerge, K::R3d1, K::Unflip};
    case K::CrissCross:
      return {K::R2u1, K::Flip, K::Flip, K::CuspMerge, K::R3d1, K::Unflip};
    case K::FlipAndSlip: {
      std::vector<K> v{K::Flip, K::Flip, K::R2d2, K::R2d2};
      for (int i = 0; i < unsinks; ++i) v.push_back(K::Unsink);
      return v;
    }
    case K::DefiniteFlipAndSlip:
      return {K::Birth, K::CuspMerge, K::R2d2, K::R2u0, K::Death, K::FoldMerge};
    case K::KinkRemoval:
      return {K::Flip, K::R2u1, K::Unsink, K::Unsink};
    default:
      return {};
  }
}

std::string MoveSite::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto put = [&](const char* k, int v, int def) {
    if (v == def) return;
    if (!first) os << ' ';
    first = false;
    os << k << '=' << v;
  };
  put("event", event, -1);
  put("event2", event2, -1);
  put("pos", pos, -1);
  put("mark", mark, -1);
  put("strand", strand, -1);
  put("count", count, 4);
  if (mirror) {
    if (!first) os << ' ';
    first = false;
    os << "mirror=1";
  }
  if (twist_out) {
    if (!first) os << ' ';
    first = false;
    os << "twist_out=" << (*twist_out == Twist::Twisted ? 1 : 0);
  }
  return os.str();
}

std::optional<MoveSite> MoveSite::parse(const std::string& s) {
  MoveSite site;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) return std::nullopt;
    std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    int n;
    try {
      n = std::stoi(v);
    } catch (...) {
      return std::nullopt;
    }
    if (k == "event") site.event = n;
    else if (k == "event2") site.event2 = n;
    else if (k == "pos") site.pos = n;
    else if (k == "mark") site.mark = n;
    else if (k == "strand") site.strand = n;
    else if (k == "count") site.count = n;
    else if (k == "mirror") site.mirror = n != 0;
    else if (k == "twist_out")
      site.twist_out = n ? Twist::Twisted : Twist::Untwisted;
    else
      return std::nullopt;
  }
  return site;
}

// ---------------------------------------------------------------------------

namespace {

using ER = ApplyResult;

ER fail(ApplyErrorKind k, const std::string& det) {
  ER r;
  r.error = ApplyError{k, det};
  return r;
}

ER mismatch(const std::string& det) {
  return fail(ApplyErrorKind::PatternMismatch, det);
}

// interval t slice
const std::vector<SweepStrand>& islice(const SlicedDiagram& d, const Sweep& s,
                                       int t) {
  if (d.event_count() == 0) return s.slices[0];
  return s.slices[t + 1];
}

// event insertion index for interval t
int insert_index(const SlicedDiagram& d, int t) {
  return d.event_count() == 0 ? 0 : t + 1;
}

void shift_marks_from(SlicedDiagram& d, int j, int n) {
  for (auto& m : d.marks)
    if (m.after_event >= j) m.after_event += n;
}

// Removes events [e, e+n) assuming slice widths match across; marks in the
// removed intervals are re-anchored to the interval before e with gap mapped
// by `gap_map` (which receives the old interval offset 0..n-1 and gap).
void erase_events(SlicedDiagram& d, int e, int n,
                  const std::function<int(int, int)>& gap_map) {
  int E = d.event_count();
  int newE = E - n;
  for (auto& m : d.marks) {
    if (m.after_event >= e && m.after_event <= e + n - 1) {
      m.gap = gap_map(m.after_event - e, m.gap);
      m.after_event = newE == 0 ? 0 : (e - 1 + newE) % newE;
    } else if (m.after_event > e + n - 1) {
      m.after_event -= n;
    }
  }
  d.events.erase(d.events.begin() + e, d.events.begin() + e + n);
}

// Shared epilogue: re-validate, suspend twist bits on cusped components,
// apply a requested output twist to the component of base strand `hint`.
ER finish(SlicedDiagram out, MoveKind kind, const MoveSite& site, Legality leg,
          bool override_used, std::vector<std::string> obligations,
          int twist_hint_base = -1) {
  Sweep s;
  if (auto err = sweep(out, s))
    return fail(ApplyErrorKind::InvalidDiagram, err->rule + ": " + err->detail);
  for (int j = 0; j < out.width_at_start(); ++j) {
    if (out.base[j].kind != StrandKind::Indefinite) continue;
    int c = s.token_component[j];
    if (c >= 0 && s.component_cusps[c] > 0) out.base[j].twist.reset();
  }
  if (site.twist_out && twist_hint_base >= 0 &&
      twist_hint_base < out.width_at_start()) {
    int c = s.token_component[twist_hint_base];
    if (c >= 0 && s.component_cusps[c] == 0)
      for (int j = 0; j < out.width_at_start(); ++j)
        if (s.token_component[j] == c) out.base[j].twist = site.twist_out;
  }
  auto rep = validate(out);
  if (!rep)
    return fail(ApplyErrorKind::InvalidDiagram, rep.summary());
  ER r;
  r.out = std::move(out);
  r.entry = ScriptEntry{kind, site, leg, override_used, std::move(obligations)};
  return r;
}

// --- individual moves -------------------------------------------------------

ER apply_birth(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int t = site.event < 0 ? 0 : site.event;
  if (t < 0 || t >= d.interval_count()) return mismatch("birth: interval");
  const auto& sl = islice(d, s, t);
  int g = site.pos;
  if (g < 0 || g > static_cast<int>(sl.size())) return mismatch("birth: gap");
  // never inside a definite fence at the same spot: gap between any strands ok
  SlicedDiagram out = d;
  int j = insert_index(d, t);
  shift_marks_from(out, j, 2);
  out.events.insert(out.events.begin() + j,
                    {Event{EventTag::CuspL, g, RadialSign::TowardNorth},
                     Event{EventTag::CuspR, g, RadialSign::TowardNorth}});
  return finish(std::move(out), MoveKind::Birth, site,
                Legality::AlwaysRealizable, false, {});
}

bool eye_at(const SlicedDiagram& d, const Sweep& s, int e) {
  if (e + 1 >= d.event_count()) return false;
  const Event& a = d.events[e];
  const Event& b = d.events[e + 1];
  if (a.tag != EventTag::CuspL || b.tag != EventTag::CuspR) return false;
  if (a.pos != b.pos) return false;
  // born pair must be the dying pair
  return s.slices[e + 1][a.pos].token == s.slices[e + 1][b.pos].token &&
         s.slices[e + 1][a.pos + 1].token == s.slices[e + 1][b.pos + 1].token;
}

ER apply_death(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int e = site.event;
  if (e < 0 || !eye_at(d, s, e)) return mismatch("death: no eye here");
  int i = d.events[e].pos;
  for (const auto& m : d.marks)
    if (m.after_event == e && m.gap == i + 1)
      return mismatch("death: mark inside the eye");
  SlicedDiagram out = d;
  erase_events(out, e, 2, [&](int off, int gap) {
    if (off == 1) return gap;
    if (gap <= i) return gap;
    return gap - 2;
  });
  return finish(std::move(out), MoveKind::Death, site,
                Legality::AlwaysRealizable, false, {});
}

// Flip: a fold arc sprouts a swallowtail bump (two cusps, one crossing).
ER apply_flip(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int t = site.event < 0 ? 0 : site.event;
  int p = site.pos;
  if (t < 0 || t >= d.interval_count()) return mismatch("flip: interval");
  const auto& sl = islice(d, s, t);
  if (p < 0 || p >= static_cast<int>(sl.size())) return mismatch("flip: pos");
  if (sl[p].attr.kind != StrandKind::Indefinite)
    return mismatch("flip: definite strand");
  RadialSign sig = sl[p].attr.sign;
  SlicedDiagram out = d;
  int j = insert_index(d, t);
  shift_marks_from(out, j, 3);
  std::vector<Event> w;
  if (sig == RadialSign::TowardSouth && !site.mirror) {
    // bump south of the strand
    w = {Event{EventTag::CuspL, p, RadialSign::TowardNorth},
         Event{EventTag::Cross, p + 1, RadialSign::TowardNorth},
         Event{EventTag::CuspR, p + 1, RadialSign::TowardNorth}};
  } else if (sig == RadialSign::TowardSouth && site.mirror) {
    // bump north
    w = {Event{EventTag::CuspL, p + 1, RadialSign::TowardNorth},
         Event{EventTag::Cross, p, RadialSign::TowardNorth},
         Event{EventTag::CuspR, p + 1, RadialSign::TowardNorth}};
  } else if (sig == RadialSign::TowardNorth && !site.mirror) {
    w = {Event{EventTag::CuspL, p, RadialSign::TowardNorth},
         Event{EventTag::Cross, p + 1, RadialSign::TowardNorth},
         Event{EventTag::CuspR, p, RadialSign::TowardNorth}};
  } else {
    w = {Event{EventTag::CuspL, p + 1, RadialSign::TowardNorth},
         Event{EventTag::Cross, p, RadialSign::TowardNorth},
         Event{EventTag::CuspR, p, RadialSign::TowardNorth}};
  }
  out.events.insert(out.events.begin() + j, w.begin(), w.end());
  return finish(std::move(out), MoveKind::Flip, site,
                Legality::AlwaysRealizable, false, {});
}

// Detects a flip bump at events [e, e+2]; returns the base position p.
std::optional<std::pair<int, bool>> flip_shape_at(const SlicedDiagram& d,
                                                  const Sweep& s, int e) {
  if (e + 2 >= d.event_count()) return std::nullopt;
  const Event &a = d.events[e], &b = d.events[e + 1], &c = d.events[e + 2];
  if (a.tag != EventTag::CuspL || b.tag != EventTag::Cross ||
      c.tag != EventTag::CuspR)
    return std::nullopt;
  // four shapes
  struct Shape {
    int da, db, dc;
    bool mirror;
  };
  // offsets of (CuspL, Cross, CuspR) relative to p, per variant
  static const Shape shapes[] = {
      {0, 1, 1, false},  // sign S, bump south
      {1, 0, 1, true},   // sign S, bump north
      {0, 1, 0, false},  // sign N, bump south
      {1, 0, 0, true},   // sign N, bump north
  };
  for (const auto& sh : shapes) {
    int p = a.pos - sh.da;
    if (p < 0) continue;
    if (b.pos != p + sh.db || c.pos != p + sh.dc) continue;
    // the cusp-born pair must die at the CuspR paired with the pre-existing
    // strand; verify by tokens: exactly one of the CuspR's dying pair was
    // born at the CuspL.
    int bl = s.slices[e + 1][a.pos].token, bh = s.slices[e + 1][a.pos + 1].token;
    int dl = s.slices[e + 2][c.pos].token, dh = s.slices[e + 2][c.pos + 1].token;
    int shared = 0;
    for (int x : {bl, bh})
      for (int y : {dl, dh})
        if (x == y) shared++;
    if (shared != 1) continue;
    return std::make_pair(p, sh.mirror);
  }
  return std::nullopt;
}

ER apply_unflip(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int e = site.event;
  if (e < 0) return mismatch("unflip: event");
  auto shape = flip_shape_at(d, s, e);
  if (!shape) return mismatch("unflip: no flip bump here");
  int p = shape->first;
  for (const auto& m : d.marks)
    if (m.after_event >= e && m.after_event <= e + 2 &&
        (m.gap == p + 1 || m.gap == p + 2))
      return mismatch("unflip: mark inside the bump");
  SlicedDiagram out = d;
  erase_events(out, e, 3, [&](int, int gap) {
    if (gap <= p) return gap;
    if (gap == p + 3) return p + 1;
    return gap - 2;
  });
  return finish(std::move(out), MoveKind::Unflip, site,
                Legality::AlwaysRealizable, false, {}, -1);
}

ER apply_unsink(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int e = site.event;
  if (e < 0 || e >= d.event_count()) return mismatch("unsink: event");
  const Event& ev = d.events[e];
  SlicedDiagram out = d;
  int hint = -1;
  if (ev.tag == EventTag::CuspL) {
    int tok = s.slices[e + 1][ev.pos].token;
    // remember a base strand in the same component for the twist output
    for (int j = 0; j < d.width_at_start(); ++j)
      if (s.token_component[j] == s.token_component[tok]) hint = j;
    out.events[e] = Event{EventTag::Min, ev.pos, RadialSign::TowardNorth};
    out.marks.push_back({e, ev.pos + 1});
  } else if (ev.tag == EventTag::CuspR) {
    int tok = s.slices[e][ev.pos].token;
    for (int j = 0; j < d.width_at_start(); ++j)
      if (s.token_component[j] == s.token_component[tok]) hint = j;
    out.events[e] = Event{EventTag::Max, ev.pos, RadialSign::TowardNorth};
    int E = d.event_count();
    out.marks.push_back({(e - 1 + E) % E, ev.pos + 1});
  } else {
    return mismatch("unsink: not a cusp");
  }
  return finish(std::move(out), MoveKind::Unsink, site,
                Legality::AlwaysRealizable, false, {}, hint);
}

ER apply_sink(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
              bool ov) {
  if (!ov) return fail(ApplyErrorKind::GatedRefused, "sink is gated");
  int e = site.event;
  if (e < 0 || e >= d.event_count()) return mismatch("sink: event");
  const Event& ev = d.events[e];
  (void)s;
  int E = d.event_count();
  int want_interval = ev.tag == EventTag::Min ? e : (e - 1 + E) % E;
  if (ev.tag != EventTag::Min && ev.tag != EventTag::Max)
    return mismatch("sink: not a smooth extremum");
  if (ev.upper != RadialSign::TowardNorth)
    return mismatch("sink: extremum orientation incompatible with a cusp");
  int mi = site.mark;
  if (mi < 0 || mi >= static_cast<int>(d.marks.size()))
    return mismatch("sink: mark");
  if (d.marks[mi].after_event != want_interval ||
      d.marks[mi].gap != ev.pos + 1)
    return mismatch("sink: mark not in the wedge position");
  SlicedDiagram out = d;
  out.events[e] =
      Event{ev.tag == EventTag::Min ? EventTag::CuspL : EventTag::CuspR,
            ev.pos, RadialSign::TowardNorth};
  out.marks.erase(out.marks.begin() + mi);
  return finish(std::move(out), MoveKind::Sink, site, Legality::Gated, true,
                {"sink: the Lefschetz vanishing cycle must match a fold "
                 "vanishing cycle on the higher side"});
}

ER apply_wrinkle(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int mi = site.mark;
  if (mi < 0 || mi >= static_cast<int>(d.marks.size()))
    return mismatch("wrinkle: mark");
  LefschetzMark m = d.marks[mi];
  SlicedDiagram out = d;
  out.marks.erase(out.marks.begin() + mi);
  if (!site.mirror) {
    // floating three-cusped deltoid in the mark's region
    int j = insert_index(d, m.after_event);
    shift_marks_from(out, j, 4);
    int g = m.gap;
    out.events.insert(
        out.events.begin() + j,
        {Event{EventTag::CuspL, g, RadialSign::TowardNorth},
         Event{EventTag::CuspL, g, RadialSign::TowardNorth},
         Event{EventTag::Max, g + 1, RadialSign::TowardSouth},
         Event{EventTag::CuspR, g, RadialSign::TowardNorth}});
  } else {
    // wound form around the north pole: new top circle with three kinks
    if (s.regions[m.after_event][m.gap] != s.north_region)
      return mismatch("wrinkle: wound form needs the mark at the north pole");
    // kinks spread across the event list for sector balance
    SlicedDiagram work = out;
    int E = work.event_count();
    std::vector<int> at = {E, (2 * E) / 3, E / 3};
    for (int idx : at) {
      int w = slice_width_after(work, idx);
      shift_marks_from(work, idx, 2);
      work.events.insert(
          work.events.begin() + idx,
          {Event{EventTag::CuspL, w - 1 + 1, RadialSign::TowardNorth},
           Event{EventTag::Max, w + 1, RadialSign::TowardSouth}});
    }
    int maxid = 0;
    for (const auto& b : work.base) maxid = std::max(maxid, b.id + 1);
    StrandAttr a;
    a.id = maxid;
    a.kind = StrandKind::Indefinite;
    a.sign = RadialSign::TowardSouth;
    work.base.push_back(a);
    out = std::move(work);
  }
  return finish(std::move(out), MoveKind::Wrinkle, site,
                Legality::AlwaysRealizable, false, {});
}

// floating deltoid pattern at events [e, e+3]
bool deltoid_at(const SlicedDiagram& d, const Sweep& s, int e, int* gap) {
  if (e + 3 >= d.event_count()) return false;
  const Event &a = d.events[e], &b = d.events[e + 1], &c = d.events[e + 2],
              &f = d.events[e + 3];
  if (a.tag != EventTag::CuspL || b.tag != EventTag::CuspL ||
      c.tag != EventTag::Max || f.tag != EventTag::CuspR)
    return false;
  int g = a.pos;
  if (b.pos != g || c.pos != g + 1 || f.pos != g) return false;
  // single component born and dying entirely inside
  int A = s.slices[e + 1][g].token;
  int B = s.slices[e + 1][g + 1].token;
  int C = s.slices[e + 2][g].token;
  int D = s.slices[e + 2][g + 1].token;
  if (s.token_component[A] != s.token_component[B] ||
      s.token_component[A] != s.token_component[C] ||
      s.token_component[A] != s.token_component[D])
    return false;
  *gap = g;
  return true;
}

ER apply_unwrinkle(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
                   bool ov) {
  if (!ov) return fail(ApplyErrorKind::GatedRefused, "unwrinkle is gated");
  int e = site.event, g = -1;
  if (e < 0 || !deltoid_at(d, s, e, &g))
    return mismatch("unwrinkle: no wrinkled circle here");
  for (const auto& m : d.marks)
    if (m.after_event >= e && m.after_event <= e + 3 && m.gap == g + 1)
      return mismatch("unwrinkle: mark inside the wrinkle");
  SlicedDiagram out = d;
  erase_events(out, e, 4, [&](int, int gap) {
    if (gap <= g) return gap;
    return gap - 2;
  });
  out.marks.push_back(
      {out.event_count() == 0 ? 0
                              : (e - 1 + out.event_count()) % out.event_count(),
       g});
  return finish(std::move(out), MoveKind::Unwrinkle, site, Legality::Gated,
                true,
                {"unwrinkle: the resulting isolated singularity must be "
                 "chirally Lefschetz"});
}

ER apply_cusp_merge(const SlicedDiagram& d, const Sweep& s,
                    const MoveSite& site) {
  int e = site.event;
  int f = site.event2 < 0 ? e + 1 : site.event2;
  if (f != e + 1) return mismatch("cusp_merge: cusps must be adjacent");
  if (e < 0 || f >= d.event_count()) return mismatch("cusp_merge: events");
  const Event &a = d.events[e], &b = d.events[f];
  if (a.tag != EventTag::CuspR || b.tag != EventTag::CuspL || a.pos != b.pos)
    return mismatch("cusp_merge: need facing cusps at one level");
  int i = a.pos;
  // hypothesis: the fiber over the joining corridor is connected
  const FiberClass corridor = s.region_fiber[s.regions[e][i]];
  if (corridor.components != 1)
    return fail(ApplyErrorKind::HypothesisUnmet,
                "cusp_merge: fibers over the joining path are disconnected");
  // components may only merge when their handle effects agree
  int compA = s.token_component[s.slices[e][i].token];
  int compB = s.token_component[s.slices[f + 1][i].token];
  if (s.component_effect[compA] != s.component_effect[compB])
    return mismatch("cusp_merge: component effects disagree");
  int hint = -1;
  for (int j = 0; j < d.width_at_start(); ++j)
    if (s.token_component[j] == compA || s.token_component[j] == compB)
      hint = j;
  SlicedDiagram out = d;
  erase_events(out, e, 2, [&](int off, int gap) {
    if (off == 1) return gap;  // slice already back to full width
    if (gap <= i - 1) return gap;
    if (gap == i) return i + 1;  // corridor band sits between the strands now
    return gap + 2;
  });
  return finish(std::move(out), MoveKind::CuspMerge, site,
                Legality::Conditional, false, {}, hint);
}

ER apply_fold_merge(const SlicedDiagram& d, const Sweep& s,
                    const MoveSite& site, bool ov) {
  if (!ov) return fail(ApplyErrorKind::GatedRefused, "fold_merge is gated");
  int e = site.event;
  if (e < 0 || e + 1 >= d.event_count()) return mismatch("fold_merge: events");
  const Event &a = d.events[e], &b = d.events[e + 1];
  if (a.tag != EventTag::Max || b.tag != EventTag::Min || a.pos != b.pos)
    return mismatch("fold_merge: need facing fold tips");
  if (a.upper != b.upper)
    return mismatch("fold_merge: reconnection signs disagree");
  (void)s;
  SlicedDiagram out = d;
  int i = a.pos;
  erase_events(out, e, 2, [&](int off, int gap) {
    if (off == 1) return gap;
    return gap >= i ? gap + 2 : gap;
  });
  return finish(std::move(out), MoveKind::FoldMerge, site, Legality::Gated,
                true,
                {"fold_merge: the vertical segment carries a canceling "
                 "1-/2-handle pair"});
}

ER apply_push_pull(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
                   MoveKind kind, bool ov) {
  bool pull = kind == MoveKind::Pull;
  if (pull && !ov) return fail(ApplyErrorKind::GatedRefused, "pull is gated");
  int mi = site.mark;
  if (mi < 0 || mi >= static_cast<int>(d.marks.size()))
    return mismatch("push: mark");
  const LefschetzMark m = d.marks[mi];
  const auto& sl = islice(d, s, m.after_event);
  bool north = !site.mirror;
  int strand = north ? m.gap : m.gap - 1;
  if (strand < 0 || strand >= static_cast<int>(sl.size()))
    return mismatch("push: no strand to cross");
  const StrandAttr& a = sl[strand].attr;
  if (a.kind == StrandKind::Definite)
    return mismatch("push: cannot cross a definite fold");
  // push: from the arrow-target (lower) side to the arrow-source side
  bool arrow_towards_mark = north ? a.sign == RadialSign::TowardSouth
                                  : a.sign == RadialSign::TowardNorth;
  if (!pull && !arrow_towards_mark)
    return mismatch("push: arrow points away from the mark");
  if (pull && arrow_towards_mark)
    return mismatch("pull: arrow points toward the mark");
  SlicedDiagram out = d;
  out.marks[mi].gap = north ? m.gap + 1 : m.gap - 1;
  std::vector<std::string> obl;
  if (pull)
    obl.push_back(
        "pull: the Lefschetz vanishing cycle and the fold vanishing cycle "
        "admit disjoint representatives");
  return finish(std::move(out), kind, site,
                pull ? Legality::Gated : Legality::AlwaysRealizable, pull,
                std::move(obl));
}

int bigon_inward_count(const StrandAttr& lower, const StrandAttr& upper) {
  int n = 0;
  if (lower.sign == RadialSign::TowardNorth) n++;
  if (upper.sign == RadialSign::TowardSouth) n++;
  return n;
}

ER apply_r2_remove(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
                   MoveKind kind, bool ov) {
  int want = kind == MoveKind::R2u0 ? 0 : kind == MoveKind::R2u1 ? 1 : 2;
  if (kind == MoveKind::R2u2 && !ov)
    return fail(ApplyErrorKind::GatedRefused, "r2u2 is gated");
  int e = site.event;
  if (e < 0 || e + 1 >= d.event_count()) return mismatch("r2: events");
  const Event &a = d.events[e], &b = d.events[e + 1];
  if (a.tag != EventTag::Cross || b.tag != EventTag::Cross || a.pos != b.pos)
    return mismatch("r2: need an adjacent crossing pair");
  int i = a.pos;
  const auto& mid = s.slices[e + 1];
  int in = bigon_inward_count(mid[i].attr, mid[i + 1].attr);
  if (in != want) return mismatch("r2: bigon arrow count differs");
  for (const auto& m : d.marks)
    if (m.after_event == e && m.gap == i + 1)
      return mismatch("r2: mark inside the bigon");
  SlicedDiagram out = d;
  erase_events(out, e, 2, [&](int, int gap) { return gap; });
  std::vector<std::string> obl;
  if (kind == MoveKind::R2u2)
    obl.push_back(
        "r2u2: the upper 2-handle does not wind along the lower 1-handle");
  return finish(std::move(out), kind, site,
                kind == MoveKind::R2u2 ? Legality::Gated
                                       : Legality::AlwaysRealizable,
                kind == MoveKind::R2u2 && ov, std::move(obl));
}

ER apply_r2_create(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
                   MoveKind kind, bool ov) {
  int want = kind == MoveKind::R2d0 ? 0 : kind == MoveKind::R2d1 ? 1 : 2;
  bool gated = kind != MoveKind::R2d2;
  if (gated && !ov)
    return fail(ApplyErrorKind::GatedRefused, std::string(move_name(kind)) +
                                                  " is gated");
  int t = site.event < 0 ? 0 : site.event;
  if (t < 0 || t >= d.interval_count()) return mismatch("r2: interval");
  const auto& sl = islice(d, s, t);
  int i = site.pos;
  if (i < 0 || i + 1 >= static_cast<int>(sl.size()))
    return mismatch("r2: strand pair");
  if (sl[i].attr.kind != StrandKind::Indefinite ||
      sl[i + 1].attr.kind != StrandKind::Indefinite)
    return mismatch("r2: definite strand");
  // bigon after the first crossing: boundaries swap
  int in = bigon_inward_count(sl[i + 1].attr, sl[i].attr);
  if (in != want) return mismatch("r2: bigon arrow count differs");
  SlicedDiagram out = d;
  int j = insert_index(d, t);
  shift_marks_from(out, j, 2);
  out.events.insert(out.events.begin() + j,
                    {Event{EventTag::Cross, i, RadialSign::TowardNorth},
                     Event{EventTag::Cross, i, RadialSign::TowardNorth}});
  std::vector<std::string> obl;
  if (gated)
    obl.push_back(std::string(move_name(kind)) +
                  ": handle-slide trace isotoped away from the co-core");
  return finish(std::move(out), kind, site,
                gated ? Legality::Gated : Legality::AlwaysRealizable,
                gated && ov, std::move(obl));
}

// R3 triple [Cross(a), Cross(b), Cross(a)] with b = a+-1.
ER apply_r3(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
            MoveKind kind, bool ov) {
  int want = kind == MoveKind::R3d0   ? 0
             : kind == MoveKind::R3d1 ? 1
             : kind == MoveKind::R3d2 ? 2
                                      : 3;
  bool gated = kind == MoveKind::R3d0 || kind == MoveKind::R3d1;
  if (gated && !ov)
    return fail(ApplyErrorKind::GatedRefused, std::string(move_name(kind)) +
                                                  " is gated");
  int e = site.event;
  if (e < 0 || e + 2 >= d.event_count()) return mismatch("r3: events");
  const Event &x = d.events[e], &y = d.events[e + 1], &z = d.events[e + 2];
  if (x.tag != EventTag::Cross || y.tag != EventTag::Cross ||
      z.tag != EventTag::Cross)
    return mismatch("r3: need three crossings");
  int a = x.pos, b = y.pos;
  if (z.pos != a || (b != a + 1 && b != a - 1))
    return mismatch("r3: not a braid triangle");
  const auto& sl = s.slices[e];  // before the first crossing
  int in;
  if (b == a + 1) {
    in = (sl[a + 1].attr.sign == RadialSign::TowardNorth) +
         (sl[a].attr.sign == RadialSign::TowardSouth) +
         (sl[a + 2].attr.sign == RadialSign::TowardSouth);
  } else {
    in = (sl[a + 1].attr.sign == RadialSign::TowardNorth) +
         (sl[a - 1].attr.sign == RadialSign::TowardNorth) +
         (sl[a].attr.sign == RadialSign::TowardSouth);
  }
  if (in != want) return mismatch("r3: triangle arrow count differs");
  int lo = std::min(a, b), hi = std::max(a, b) + 2;
  for (const auto& m : d.marks)
    if ((m.after_event == e || m.after_event == e + 1) && m.gap >= lo &&
        m.gap <= hi)
      return mismatch("r3: mark too close to the triangle");
  SlicedDiagram out = d;
  out.events[e].pos = b;
  out.events[e + 1].pos = a;
  out.events[e + 2].pos = b;
  std::vector<std::string> obl;
  if (gated)
    obl.push_back(std::string(move_name(kind)) +
                  ": the strand crossing over the two 1-handles does not "
                  "slide over them");
  return finish(std::move(out), kind, site,
                gated ? Legality::Gated : Legality::AlwaysRealizable,
                gated && ov, std::move(obl));
}

// C-move: a cusp passes through a transverse fold arc (+2 crossings).
ER apply_cmove(const SlicedDiagram& d, const Sweep& s, const MoveSite& site) {
  int e = site.event;
  if (e < 0 || e >= d.event_count()) return mismatch("cmove: event");
  const Event ev = d.events[e];
  SlicedDiagram out = d;
  if (ev.tag == EventTag::CuspL) {
    const auto& east = s.slices[e + 1];
    int i = ev.pos;
    bool up = !site.mirror;
    int xpos = up ? i + 2 : i - 1;
    if (xpos < 0 || xpos >= static_cast<int>(east.size()))
      return mismatch("cmove: no neighbor strand");
    if (east[xpos].attr.kind == StrandKind::Definite)
      return mismatch("cmove: definite strand");
    for (const auto& m : d.marks)
      if (m.after_event == e && m.gap >= std::min(i, xpos) &&
          m.gap <= std::max(i + 1, xpos) + 1)
        return mismatch("cmove: mark in the way");
    shift_marks_from(out, e + 1, 2);
    if (up) {
      out.events[e] = Event{EventTag::CuspL, i + 1, ev.upper};
      out.events.insert(out.events.begin() + e + 1,
                        {Event{EventTag::Cross, i, RadialSign::TowardNorth},
                         Event{EventTag::Cross, i + 1, RadialSign::TowardNorth}});
    } else {
      out.events[e] = Event{EventTag::CuspL, i - 1, ev.upper};
      out.events.insert(out.events.begin() + e + 1,
                        {Event{EventTag::Cross, i, RadialSign::TowardNorth},
                         Event{EventTag::Cross, i - 1, RadialSign::TowardNorth}});
    }
  } else if (ev.tag == EventTag::CuspR) {
    const auto& west = s.slices[e];
    int i = ev.pos;
    bool up = !site.mirror;
    int xpos = up ? i + 2 : i - 1;
    if (xpos < 0 || xpos >= static_cast<int>(west.size()))
      return mismatch("cmove: no neighbor strand");
    if (west[xpos].attr.kind == StrandKind::Definite)
      return mismatch("cmove: definite strand");
    for (const auto& m : d.marks)
      if (m.after_event == (e - 1 + d.event_count()) % d.event_count() &&
          m.gap >= std::min(i, xpos) && m.gap <= std::max(i + 1, xpos) + 1)
        return mismatch("cmove: mark in the way");
    shift_marks_from(out, e, 2);
    if (up) {
      out.events[e] = Event{EventTag::CuspR, i + 1, ev.upper};
      out.events.insert(out.events.begin() + e,
                        {Event{EventTag::Cross, i + 1, RadialSign::TowardNorth},
                         Event{EventTag::Cross, i, RadialSign::TowardNorth}});
    } else {
      out.events[e] = Event{EventTag::CuspR, i - 1, ev.upper};
      out.events.insert(out.events.begin() + e,
                        {Event{EventTag::Cross, i - 1, RadialSign::TowardNorth},
                         Event{EventTag::Cross, i, RadialSign::TowardNorth}});
    }
  } else {
    return mismatch("cmove: not a cusp");
  }
  return finish(std::move(out), MoveKind::CMove, site,
                Legality::AlwaysRealizable, false, {});
}

// CInverse: reverse of a C-move pattern (-2 crossings), gated.
ER apply_cinverse(const SlicedDiagram& d, const Sweep& s, const MoveSite& site,
                  bool ov) {
  if (!ov) return fail(ApplyErrorKind::GatedRefused, "cinverse is gated");
  int e = site.event;
  if (e < 0 || e + 2 >= d.event_count()) return mismatch("cinverse: events");
  const Event &a = d.events[e], &b = d.events[e + 1], &c = d.events[e + 2];
  SlicedDiagram out = d;
  auto erase2 = [&](int at) {
    erase_events(out, at, 2, [&](int, int gap) { return gap; });
  };
  (void)s;
  if (a.tag == EventTag::CuspL && b.tag == EventTag::Cross &&
      c.tag == EventTag::Cross && b.pos == a.pos - 1 && c.pos == a.pos) {
    out.events[e] = Event{EventTag::CuspL, a.pos - 1, a.upper};
    erase2(e + 1);
  } else if (a.tag == EventTag::CuspL && b.tag == EventTag::Cross &&
             c.tag == EventTag::Cross && b.pos == a.pos + 1 &&
             c.pos == a.pos) {
    out.events[e] = Event{EventTag::CuspL, a.pos + 1, a.upper};
    erase2(e + 1);
  } else if (a.tag == EventTag::Cross && b.tag == EventTag::Cross &&
             c.tag == EventTag::CuspR && a.pos == c.pos &&
             b.pos == c.pos - 1) {
    out.events[e + 2] = Event{EventTag::CuspR, c.pos - 1, c.upper};
    erase2(e);
  } else if (a.tag == EventTag::Cross && b.tag == EventTag::Cross &&
             c.tag == EventTag::CuspR && a.pos == c.pos &&
             b.pos == c.pos + 1) {
    out.events[e + 2] = Event{EventTag::CuspR, c.pos + 1, c.upper};
    erase2(e);
  } else {
    return mismatch("cinverse: no c-move pattern here");
  }
  return finish(std::move(out), MoveKind::CInverse, site, Legality::Gated,
                true, {"cinverse: handle-slide trace isotoped away"});
}

// the base strand `z` is an eventless pole-parallel circle at the slice
// extreme nearest `pole` on every interval
bool innermost_circle(const SlicedDiagram& d, const Sweep& s, int z,
                      char pole) {
  if (z < 0 || z >= d.width_at_start()) return false;
  for (int t = 0; t < d.interval_count(); ++t) {
    const auto& sl = islice(d, s, t);
    int found = -1;
    for (int j = 0; j < static_cast<int>(sl.size()); ++j)
      if (sl[j].token == z) found = j;
    if (found < 0) return false;
    if (pole == 'N' && found != static_cast<int>(sl.size()) - 1) return false;
    if (pole == 'S' && found != 0) return false;
  }
  return true;
}

ER apply_flip_and_slip(const SlicedDiagram& d, const Sweep& s,
                       const MoveSite& site) {
  int z = site.strand;
  char pole = site.mirror ? 'S' : 'N';
  int u = site.count;
  if (u < 0 || u > 4) return mismatch("flip_and_slip: unsink count 0..4");
  if (z < 0 || z >= d.width_at_start() ||
      d.base[z].kind != StrandKind::Indefinite)
    return mismatch("flip_and_slip: strand");
  RadialSign inward =
      pole == 'N' ? RadialSign::TowardNorth : RadialSign::TowardSouth;
  if (d.base[z].sign != inward)
    return mismatch("flip_and_slip: circle is not inward-directed");
  if (!innermost_circle(d, s, z, pole))
    return mismatch("flip_and_slip: circle not innermost or not eventless");
  SlicedDiagram out = d;
  out.base[z].sign = opposite(inward);
  out.base[z].twist.reset();
  int kinks = 4 - u;
  // spread kink insertions across the event list for sector balance
  const int E0 = static_cast<int>(out.events.size());
  for (int i = kinks; i >= 1; --i) {
    int idx = (E0 * i) / std::max(kinks, 1);
    int w = slice_width_after(out, idx);
    shift_marks_from(out, idx, 2);
    if (pole == 'N') {
      out.events.insert(
          out.events.begin() + idx,
          {Event{EventTag::CuspL, w - 1, RadialSign::TowardNorth},
           Event{EventTag::Max, w, RadialSign::TowardSouth}});
    } else {
      out.events.insert(out.events.begin() + idx,
                        {Event{EventTag::CuspL, 1, RadialSign::TowardNorth},
                         Event{EventTag::Max, 0, RadialSign::TowardSouth}});
    }
  }
  for (int i = 0; i < u; ++i) {
    int E = out.event_count();
    int t = E == 0 ? 0 : E - 1;
    int w = slice_width_after(out, E);
    out.marks.push_back({t, pole == 'N' ? w : 0});
  }
  return finish(std::move(out), MoveKind::FlipAndSlip, site,
                Legality::AlwaysRealizable, false, {}, z);
}

ER apply_exchange(const SlicedDiagram& d, const Sweep& s,
                  const MoveSite& site) {
  int e = site.event;
  if (e < 0 || e >= d.event_count() || d.events[e].tag != EventTag::Cross)
    return mismatch("exchange: need a crossing");
  int i = d.events[e].pos;
  const FiberClass star = s.region_fiber[s.regions[e][i]];
  if (star.components != 1)
    return fail(ApplyErrorKind::HypothesisUnmet,
                "exchange: fibers over the (*) region are disconnected");
  SlicedDiagram out = d;
  shift_marks_from(out, e + 1, 2);
  out.events.insert(out.events.begin() + e + 1,
                    {Event{EventTag::Cross, i, RadialSign::TowardNorth},
                     Event{EventTag::Cross, i, RadialSign::TowardNorth}});
  return finish(std::move(out), MoveKind::Exchange, site,
                Legality::Conditional, false, {});
}

ER apply_criss_cross(const SlicedDiagram& d, const Sweep& s,
                     const MoveSite& site) {
  int t = site.event < 0 ? 0 : site.event;
  if (t < 0 || t >= d.interval_count()) return mismatch("criss_cross: interval");
  const auto& sl = islice(d, s, t);
  int i = site.pos;
  if (i < 0 || i + 1 >= static_cast<int>(sl.size()))
    return mismatch("criss_cross: strand pair");
  if (sl[i].attr.kind != StrandKind::Indefinite ||
      sl[i + 1].attr.kind != StrandKind::Indefinite)
    return mismatch("criss_cross: definite strand");
  const FiberClass star = s.region_fiber[s.regions[t][i]];
  if (star.components != 1)
    return fail(ApplyErrorKind::HypothesisUnmet,
                "criss_cross: fibers over the (*) region are disconnected");
  SlicedDiagram out = d;
  int j = insert_index(d, t);
  shift_marks_from(out, j, 3);
  out.events.insert(out.events.begin() + j,
                    {Event{EventTag::Cross, i, RadialSign::TowardNorth},
                     Event{EventTag::Cross, i, RadialSign::TowardNorth},
                     Event{EventTag::Cross, i, RadialSign::TowardNorth}});
  return finish(std::move(out), MoveKind::CrissCross, site,
                Legality::Conditional, false, {});
}

ER apply_definite_fas(const SlicedDiagram& d, const Sweep& s,
                      const MoveSite& site) {
  int z = site.strand;
  if (z < 0 || z >= d.width_at_start() ||
      d.base[z].kind != StrandKind::Definite)
    return mismatch("definite_flip_and_slip: not a definite circle");
  bool south = z == 0;
  bool north = z == d.width_at_start() - 1;
  if (!south && !north)
    return mismatch("definite_flip_and_slip: circle must be outermost");
  const FiberClass beyond =
      south ? s.region_fiber[s.south_region] : s.region_fiber[s.north_region];
  if (beyond.components != 0)
    return mismatch("definite_flip_and_slip: region beyond is not empty");
  SlicedDiagram out = d;
  out.base[z].kind = StrandKind::Indefinite;
  out.base[z].sign = south ? RadialSign::TowardNorth : RadialSign::TowardSouth;
  out.base[z].effect = ComponentEffect::Nonseparating;
  out.base[z].twist.reset();
  if (south) out.seed = FiberClass{0, 1};
  return finish(std::move(out), MoveKind::DefiniteFlipAndSlip, site,
                Legality::AlwaysRealizable, false, {}, z);
}

// kink: [Min(p+1), Cross(p), Max(p)] self-crossing loop; removal trades it
// for two Lefschetz marks on the higher side.
ER apply_kink_removal(const SlicedDiagram& d, const Sweep& s,
                      const MoveSite& site) {
  int e = site.event;
  if (e < 0 || e + 2 >= d.event_count()) return mismatch("kink: events");
  const Event &a = d.events[e], &b = d.events[e + 1], &c = d.events[e + 2];
  if (a.tag != EventTag::Min || b.tag != EventTag::Cross ||
      c.tag != EventTag::Max)
    return mismatch("kink: pattern");
  int p = c.pos;
  if (a.pos != p + 1 || b.pos != p) return mismatch("kink: pattern positions");
  // the loop must be a single curve: dying pair = one born + the strand
  int born_lo = s.slices[e + 1][a.pos].token;
  int born_hi = s.slices[e + 1][a.pos + 1].token;
  int die_lo = s.slices[e + 2][c.pos].token;
  int die_hi = s.slices[e + 2][c.pos + 1].token;
  int shared = 0;
  for (int x : {born_lo, born_hi})
    for (int y : {die_lo, die_hi})
      if (x == y) shared++;
  if (shared != 1) return mismatch("kink: loop is a separate oval");
  for (const auto& m : d.marks)
    if (m.after_event >= e && m.after_event <= e + 2 && m.gap >= p &&
        m.gap <= p + 3)
      return mismatch("kink: mark caught in the loop");
  SlicedDiagram out = d;
  int before = euler_characteristic(d);
  erase_events(out, e, 3, [&](int, int gap) {
    if (gap <= p) return gap;
    return gap - 2;
  });
  int E2 = out.event_count();
  int t = E2 == 0 ? 0 : (e - 1 + E2) % E2;
  out.marks.push_back({t, p + 1});
  out.marks.push_back({t, p + 1});
  // the other chirality of loop would need an achiral singularity
  Sweep s2;
  if (sweep(out, s2))
    return mismatch("kink: removal does not close");
  if (euler_characteristic(out, s2) != before)
    return mismatch("kink: loop chirality is not removable");
  return finish(std::move(out), MoveKind::KinkRemoval, site,
                Legality::AlwaysRealizable, false, {});
}

ER apply_isotopy_commute(const SlicedDiagram& d, const MoveSite& site) {
  SlicedDiagram out = d;
  if (!commute_events(out, site.event))
    return mismatch("isotopy_commute: events do not commute");
  return finish(std::move(out), MoveKind::IsotopyCommute, site,
                Legality::AlwaysRealizable, false, {});
}

ER apply_isotopy_cancel(const SlicedDiagram& d, const MoveSite& site) {
  SlicedDiagram out = d;
  if (!cancel_wiggle(out, site.event))
    return mismatch("isotopy_cancel_pair: no wiggle here");
  return finish(std::move(out), MoveKind::IsotopyCancelPair, site,
                Legality::AlwaysRealizable, false, {});
}

// Slide the upper branch of a topmost oval across the north pole (mirror:
// lower branch of a bottommost oval across the south pole). The oval becomes
// a winding circle; the former interior swallows the pole.
ER apply_pole_slide(const SlicedDiagram& d, const Sweep& s,
                    const MoveSite& site) {
  int e = site.event, f = site.event2;
  if (e < 0 || f <= e || f >= d.event_count())
    return mismatch("pole_slide: events");
  const Event &a = d.events[e], &b = d.events[f];
  if (a.tag != EventTag::Min || b.tag != EventTag::Max)
    return mismatch("pole_slide: need an oval");
  int i = a.pos;
  if (b.pos != i) return mismatch("pole_slide: oval tips misaligned");
  int born_lo = s.slices[e + 1][i].token, born_hi = s.slices[e + 1][i + 1].token;
  if (s.slices[f][i].token != born_lo || s.slices[f][i + 1].token != born_hi)
    return mismatch("pole_slide: not a single oval");
  char pole = site.mirror ? 'S' : 'N';
  for (int t = e; t < f; ++t) {
    const auto& sl = s.slices[t + 1];
    if (pole == 'N' && i + 2 != static_cast<int>(sl.size()))
      return mismatch("pole_slide: oval not at the top");
    if (pole == 'S' && i != 0)
      return mismatch("pole_slide: oval not at the bottom");
  }
  for (int t = e + 1; t < f; ++t) {
    const Event& ev = d.events[t];
    if (ev.tag != EventTag::Cross)
      return mismatch("pole_slide: tip event under the oval");
    if (pole == 'N' && ev.pos + 1 >= i)
      return mismatch("pole_slide: event in the way");
    if (pole == 'S' && ev.pos <= i + 1)
      return mismatch("pole_slide: event in the way");
  }
  // no definite circle may separate the oval from the pole; at the extreme
  // position this is automatic.
  SlicedDiagram out = d;
  RadialSign keep = pole == 'N' ? s.token_attr[born_lo].sign
                                : s.token_attr[born_hi].sign;
  // marks: the oval interior and the polar cap merge around the new circle
  for (auto& m : out.marks) {
    bool inside = m.after_event >= e && m.after_event < f;
    if (pole == 'N') {
      if (inside && m.gap == i + 2) m.gap = i + 1;
      // outside gaps unchanged: the slid arc is appended above everything
    } else {
      if (inside) {
        m.gap = m.gap <= 1 ? 0 : m.gap - 1;
      } else {
        m.gap += 1;  // new bottom strand below everything outside
      }
    }
  }
  // remove the two tip events (f first), re-anchoring marks
  for (auto& m : out.marks)
    if (m.after_event >= f) m.after_event -= 1;
  out.events.erase(out.events.begin() + f);
  for (auto& m : out.marks)
    if (m.after_event >= e) m.after_event -= 1;
  out.events.erase(out.events.begin() + e);
  const int E1 = out.event_count();
  for (auto& m : out.marks) {
    if (m.after_event < 0) m.after_event = E1 > 0 ? E1 - 1 : 0;
    if (E1 == 0) m.after_event = 0;
  }
  // the wound strand replaces the pair inside and is new outside
  if (pole == 'S') {
    for (int t = 0; t < E1; ++t) {
      bool inside = t >= e && t < f - 1;
      out.events[t].pos += inside ? -1 : +1;
    }
  }
  int maxid = 0;
  for (const auto& bb : out.base) maxid = std::max(maxid, bb.id + 1);
  StrandAttr na;
  na.id = maxid;
  na.kind = StrandKind::Indefinite;
  na.sign = keep;
  if (pole == 'N') {
    out.base.push_back(na);
  } else {
    out.base.insert(out.base.begin(), na);
  }
  return finish(std::move(out), MoveKind::IsotopyPoleSlide, site,
                Legality::AlwaysRealizable, false, {});
}

}  // namespace

ApplyResult apply(const SlicedDiagram& d, MoveKind m, const MoveSite& site,
                  bool ov) {
  Sweep s;
  if (auto err = sweep(d, s))
    return fail(ApplyErrorKind::InvalidDiagram, err->rule + ": " + err->detail);
  switch (m) {
    case MoveKind::Birth: return apply_birth(d, s, site);
    case MoveKind::Death: return apply_death(d, s, site);
    case MoveKind::Flip: return apply_flip(d, s, site);
    case MoveKind::Unflip: return apply_unflip(d, s, site);
    case MoveKind::CuspMerge: return apply_cusp_merge(d, s, site);
    case MoveKind::FoldMerge: return apply_fold_merge(d, s, site, ov);
    case MoveKind::Sink: return apply_sink(d, s, site, ov);
    case MoveKind::Unsink: return apply_unsink(d, s, site);
    case MoveKind::Wrinkle: return apply_wrinkle(d, s, site);
    case MoveKind::Unwrinkle: return apply_unwrinkle(d, s, site, ov);
    case MoveKind::Push:
    case MoveKind::Pull: return apply_push_pull(d, s, site, m, ov);
    case MoveKind::R2u0:
    case MoveKind::R2u1:
    case MoveKind::R2u2: return apply_r2_remove(d, s, site, m, ov);
    case MoveKind::R2d0:
    case MoveKind::R2d1:
    case MoveKind::R2d2: return apply_r2_create(d, s, site, m, ov);
    case MoveKind::R3d0:
    case MoveKind::R3d1:
    case MoveKind::R3d2:
    case MoveKind::R3d3: return apply_r3(d, s, site, m, ov);
    case MoveKind::CMove: return apply_cmove(d, s, site);
    case MoveKind::CInverse: return apply_cinverse(d, s, site, ov);
    case MoveKind::FlipAndSlip: return apply_flip_and_slip(d, s, site);
    case MoveKind::Exchange: return apply_exchange(d, s, site);
    case MoveKind::CrissCross: return apply_criss_cross(d, s, site);
    case MoveKind::DefiniteFlipAndSlip: return apply_definite_fas(d, s, site);
    case MoveKind::KinkRemoval: return apply_kink_removal(d, s, site);
    case MoveKind::IsotopyCommute: return apply_isotopy_commute(d, site);
    case MoveKind::IsotopyCancelPair: return apply_isotopy_cancel(d, site);
    case MoveKind::IsotopyPoleSlide: return apply_pole_slide(d, s, site);
  }
  return mismatch("unknown move");
}

std::vector<MoveSite> enumerate_sites(const SlicedDiagram& d, MoveKind m) {
  std::vector<MoveSite> out;
  Sweep s;
  if (sweep(d, s)) return out;
  const int T = d.interval_count();
  const int E = d.event_count();
  auto try_site = [&](MoveSite site) {
    auto r = apply(d, m, site, legality(m) == Legality::Gated);
    if (r) out.push_back(site);
  };
  switch (m) {
    case MoveKind::Birth:
      for (int t = 0; t < T; ++t) {
        int w = static_cast<int>(islice(d, s, t).size());
        for (int g = 0; g <= w; ++g) try_site({.event = t, .pos = g});
      }
      break;
    case MoveKind::Flip:
      for (int t = 0; t < T; ++t) {
        int w = static_cast<int>(islice(d, s, t).size());
        for (int p = 0; p < w; ++p) {
          try_site({.event = t, .pos = p});
          try_site({.event = t, .pos = p, .mirror = true});
        }
      }
      break;
    case MoveKind::R2d0:
    case MoveKind::R2d1:
    case MoveKind::R2d2:
    case MoveKind::CrissCross:
      for (int t = 0; t < T; ++t) {
        int w = static_cast<int>(islice(d, s, t).size());
        for (int p = 0; p + 1 < w; ++p) try_site({.event = t, .pos = p});
      }
      break;
    case MoveKind::Death:
    case MoveKind::Unflip:
    case MoveKind::Unsink:
    case MoveKind::CuspMerge:
    case MoveKind::FoldMerge:
    case MoveKind::R2u0:
    case MoveKind::R2u1:
    case MoveKind::R2u2:
    case MoveKind::R3d0:
    case MoveKind::R3d1:
    case MoveKind::R3d2:
    case MoveKind::R3d3:
    case MoveKind::Exchange:
    case MoveKind::KinkRemoval:
    case MoveKind::Unwrinkle:
    case MoveKind::CInverse:
    case MoveKind::IsotopyCommute:
    case MoveKind::IsotopyCancelPair:
      for (int e = 0; e < E; ++e) try_site({.event = e});
      break;
    case MoveKind::CMove:
      for (int e = 0; e < E; ++e) {
        try_site({.event = e});
        try_site({.event = e, .mirror = true});
      }
      break;
    case MoveKind::Sink:
      for (int e = 0; e < E; ++e)
        for (int k = 0; k < static_cast<int>(d.marks.size()); ++k)
          try_site({.event = e, .mark = k});
      break;
    case MoveKind::Wrinkle:
    case MoveKind::Push:
    case MoveKind::Pull:
      for (int k = 0; k < static_cast<int>(d.marks.size()); ++k) {
        try_site({.mark = k});
        try_site({.mark = k, .mirror = true});
      }
      break;
    case MoveKind::FlipAndSlip:
      for (int z = 0; z < d.width_at_start(); ++z)
        for (int u = 0; u <= 4; ++u) {
          try_site({.strand = z, .count = u});
          try_site({.strand = z, .count = u, .mirror = true});
        }
      break;
    case MoveKind::DefiniteFlipAndSlip:
      for (int z = 0; z < d.width_at_start(); ++z) try_site({.strand = z});
      break;
    case MoveKind::IsotopyPoleSlide:
      for (int e = 0; e < E; ++e)
        for (int f = e + 1; f < E; ++f) {
          try_site({.event = e, .event2 = f});
          try_site({.event = e, .event2 = f, .mirror = true});
        }
      break;
  }
  return out;
}

// --- scripts ----------------------------------------------------------------

namespace {

std::string report_line(const char* tag, const InvariantReport& r) {
  std::ostringstream os;
  os << tag << " chi=" << r.chi << " l=" << r.round_components
     << " k=" << r.lefschetz_count << " cusps=" << r.cusp_count
     << " crossings=" << r.crossing_count;
  return os.str();
}

bool parse_report(const std::string& line, InvariantReport& r) {
  std::istringstream is(line);
  std::string tag, tok;
  is >> tag;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) return false;
    int v;
    try {
      v = std::stoi(tok.substr(eq + 1));
    } catch (...) {
      return false;
    }
    std::string k = tok.substr(0, eq);
    if (k == "chi") r.chi = v;
    else if (k == "l") r.round_components = v;
    else if (k == "k") r.lefschetz_count = v;
    else if (k == "cusps") r.cusp_count = v;
    else if (k == "crossings") r.crossing_count = v;
  }
  return true;
}

bool digest_matches(const InvariantReport& a, const InvariantReport& b) {
  return a.chi == b.chi && a.round_components == b.round_components &&
         a.lefschetz_count == b.lefschetz_count &&
         a.cusp_count == b.cusp_count && a.crossing_count == b.crossing_count;
}

}  // namespace

std::string MoveScript::serialize() const {
  std::ostringstream os;
  os << "bdfscript 1\n";
  os << report_line("init", initial) << "\n";
  for (const auto& en : entries) {
    os << "move " << move_name(en.kind);
    std::string site = en.site.to_string();
    if (!site.empty()) os << ' ' << site;
    if (en.override_used) os << " override=1";
    os << "\n";
    for (const auto& ob : en.obligations) os << "obligation " << ob << "\n";
  }
  os << report_line("final", final) << "\n";
  return os.str();
}

std::optional<MoveScript> MoveScript::parse(const std::string& text) {
  MoveScript sc;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "bdfscript 1") return std::nullopt;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "init") {
      if (!parse_report(line, sc.initial)) return std::nullopt;
    } else if (head == "final") {
      if (!parse_report(line, sc.final)) return std::nullopt;
    } else if (head == "move") {
      std::string name;
      ls >> name;
      auto mk = move_from_name(name);
      if (!mk) return std::nullopt;
      std::string rest;
      std::getline(ls, rest);
      ScriptEntry en;
      en.kind = *mk;
      // extract override flag
      std::string cleaned;
      std::istringstream rs(rest);
      std::string tok;
      while (rs >> tok) {
        if (tok == "override=1") {
          en.override_used = true;
        } else {
          if (!cleaned.empty()) cleaned += ' ';
          cleaned += tok;
        }
      }
      auto site = MoveSite::parse(cleaned);
      if (!site) return std::nullopt;
      en.site = *site;
      en.legality = legality(*mk);
      sc.entries.push_back(en);
    } else if (head == "obligation") {
      if (sc.entries.empty()) return std::nullopt;
      sc.entries.back().obligations.push_back(line.substr(11));
    } else {
      return std::nullopt;
    }
  }
  return sc;
}

ReplayResult apply_script(const SlicedDiagram& d, const MoveScript& script) {
  ReplayResult res;
  InvariantReport rep = classify(d);
  if (!digest_matches(rep, script.initial)) {
    res.error = ReplayError{ReplayErrorKind::InitialMismatch, -1,
                            "initial invariant report differs"};
    return res;
  }
  SlicedDiagram cur = d;
  for (size_t i = 0; i < script.entries.size(); ++i) {
    const auto& en = script.entries[i];
    auto r = apply(cur, en.kind, en.site, en.override_used);
    if (!r) {
      res.error = ReplayError{ReplayErrorKind::StepFailed, static_cast<int>(i),
                              r.error ? r.error->detail : "apply failed"};
      return res;
    }
    cur = std::move(*r.out);
  }
  InvariantReport fin = classify(cur);
  if (!digest_matches(fin, script.final)) {
    res.error = ReplayError{ReplayErrorKind::FinalMismatch,
                            static_cast<int>(script.entries.size()),
                            "final invariant report differs"};
    return res;
  }
  res.out = std::move(cur);
  return res;
}

}  // namespace bdf

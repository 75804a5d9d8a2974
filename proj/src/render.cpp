#include "bdf/render.hpp"

#include <cmath>
#include <sstream>

#include "bdf/invariants.hpp"

namespace bdf {

namespace {

struct Pt {
  double x, y;
};

std::string fmt(double v) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const SlicedDiagram& d, const RenderOptions& opt) {
  Sweep s;
  bool swept = !sweep(d, s);
  const double R = opt.size / 2.0;
  const double cx = R, cy = R;
  const int T = d.interval_count();
  const int E = d.event_count();

  // radial position of strand index j on a slice of width w
  auto radius = [&](int j, int w) {
    return R * (0.25 + 0.6 * (j + 1.0) / (w + 1.0));
  };
  auto angle = [&](double t) { return 2.0 * M_PI * t - M_PI / 2.0; };
  auto at = [&](double theta, double r) {
    return Pt{cx + r * std::cos(theta), cy + r * std::sin(theta)};
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size
     << "\" height=\"" << opt.size << "\" viewBox=\"0 0 " << opt.size << " "
     << opt.size << "\">\n";
  os << "<style>.fold{fill:none;stroke:#000;stroke-width:1.5}"
        ".def{fill:none;stroke:#b00;stroke-width:2;stroke-dasharray:6 3}"
        ".arrow{stroke:#000;stroke-width:1}"
        ".mark{stroke:#007;stroke-width:1.5}"
        ".label{font:10px monospace;fill:#333}</style>\n";
  os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
     << fmt(R * 0.95) << "\" fill=\"#fff\" stroke=\"#ccc\"/>\n";

  if (!swept) {
    os << "<text x=\"10\" y=\"20\" class=\"label\">invalid diagram</text>\n";
    os << "</svg>\n";
    return os.str();
  }

  // strand polylines: sample each interval at its midpoint and at event
  // angles; each token contributes a closed polyline around the sweep.
  // Event k sits at angle k/E; interval t spans (t/E, (t+1)/E).
  const int steps = 6;
  for (int t = 0; t < T; ++t) {
    const auto& sl = E == 0 ? s.slices[0] : s.slices[t + 1];
    int w = static_cast<int>(sl.size());
    double t0 = E == 0 ? 0.0 : (t + 1.0) / E;
    double t1 = E == 0 ? 1.0 : (t + 2.0) / E;  // wraps for the last interval
    for (int j = 0; j < w; ++j) {
      os << "<polyline class=\""
         << (sl[j].attr.kind == StrandKind::Definite ? "def" : "fold")
         << "\" points=\"";
      for (int q = 0; q <= steps; ++q) {
        double tt = t0 + (t1 - t0) * q / steps;
        Pt p = at(angle(tt), radius(j, w));
        os << fmt(p.x) << "," << fmt(p.y) << (q < steps ? " " : "");
      }
      os << "\"/>\n";
      // co-orientation arrow at the interval midpoint
      double tm = (t0 + t1) / 2.0;
      double r = radius(j, w);
      Pt p = at(angle(tm), r);
      double dir = sl[j].attr.sign == RadialSign::TowardNorth ? 1.0 : -1.0;
      Pt q2 = at(angle(tm), r + dir * 8.0);
      os << "<line class=\"arrow\" x1=\"" << fmt(p.x) << "\" y1=\"" << fmt(p.y)
         << "\" x2=\"" << fmt(q2.x) << "\" y2=\"" << fmt(q2.y) << "\"/>\n";
    }
  }
  // events as small glyphs
  for (int k = 0; k < E; ++k) {
    const Event& ev = d.events[k];
    const auto& wsl = s.slices[k];
    int w = static_cast<int>(wsl.size());
    double th = angle(static_cast<double>(k + 1) / E);
    double r = radius(ev.pos, std::max(w, 1));
    Pt p = at(th, r);
    const char* glyph = "?";
    switch (ev.tag) {
      case EventTag::Cross: glyph = "x"; break;
      case EventTag::Min: glyph = "("; break;
      case EventTag::Max: glyph = ")"; break;
      case EventTag::CuspL: glyph = "<"; break;
      case EventTag::CuspR: glyph = ">"; break;
    }
    os << "<text class=\"label\" x=\"" << fmt(p.x - 3) << "\" y=\""
       << fmt(p.y + 3) << "\">" << glyph << "</text>\n";
  }
  // Lefschetz marks as crosses
  for (const auto& m : d.marks) {
    const auto& sl = E == 0 ? s.slices[0] : s.slices[m.after_event + 1];
    int w = static_cast<int>(sl.size());
    double tt = E == 0 ? 0.5 : (m.after_event + 1.5) / E;
    double rlo = m.gap == 0 ? R * 0.25 : radius(m.gap - 1, w);
    double rhi = m.gap == w ? R * 0.9 : radius(m.gap, w);
    Pt p = at(angle(tt), (rlo + rhi) / 2.0);
    os << "<path class=\"mark\" d=\"M" << fmt(p.x - 4) << " " << fmt(p.y - 4)
       << "L" << fmt(p.x + 4) << " " << fmt(p.y + 4) << "M" << fmt(p.x - 4)
       << " " << fmt(p.y + 4) << "L" << fmt(p.x + 4) << " " << fmt(p.y - 4)
       << "\"/>\n";
  }
  if (opt.region_labels) {
    for (int t = 0; t < T; ++t) {
      const auto& sl = E == 0 ? s.slices[0] : s.slices[t + 1];
      int w = static_cast<int>(sl.size());
      double tt = E == 0 ? 0.25 : (t + 1.5) / E;
      for (int b = 0; b <= w; ++b) {
        double rlo = b == 0 ? R * 0.2 : radius(b - 1, w);
        double rhi = b == w ? R * 0.92 : radius(b, w);
        Pt p = at(angle(tt), (rlo + rhi) / 2.0);
        os << "<text class=\"label\" x=\"" << fmt(p.x) << "\" y=\"" << fmt(p.y)
           << "\">" << s.region_fiber[s.regions[t][b]].euler << "</text>\n";
      }
    }
  }
  os << "<text class=\"label\" x=\"8\" y=\"" << opt.size - 8
     << "\">folds: solid, definite: dashed, marks: x</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace bdf

#include "bdf/examples.hpp"

#include <sstream>

namespace bdf {

namespace {

StrandAttr indef(int id, RadialSign sign,
                 ComponentEffect eff = ComponentEffect::Nonseparating) {
  StrandAttr a;
  a.id = id;
  a.kind = StrandKind::Indefinite;
  a.sign = sign;
  a.effect = eff;
  return a;
}

StrandAttr defc(int id, RadialSign collapse) {
  StrandAttr a;
  a.id = id;
  a.kind = StrandKind::Definite;
  a.sign = collapse;
  return a;
}

SlicedDiagram torus_bundle() {
  SlicedDiagram d;
  d.seed = {0, 1};
  d.meta.set("name", "torus_bundle");
  d.meta.set("connected", "1");
  d.meta.set("b1", "2");
  d.meta.set("b2plus", "1");
  return d;
}

SlicedDiagram eye() {
  SlicedDiagram d;
  d.seed = {0, 1};
  d.events.push_back({EventTag::CuspL, 0, RadialSign::TowardNorth});
  d.events.push_back({EventTag::CuspR, 0, RadialSign::TowardNorth});
  d.meta.set("name", "eye");
  d.meta.set("connected", "1");
  return d;
}

SlicedDiagram s4_sblf() {
  SlicedDiagram d;
  d.base.push_back(indef(0, RadialSign::TowardSouth));
  d.base[0].twist = Twist::Twisted;
  d.seed = {2, 1};
  d.meta.set("name", "s4_sblf");
  d.meta.set("connected", "1");
  d.meta.set("b1", "0");
  d.meta.set("b2plus", "0");
  return d;
}

SlicedDiagram ln_sblf(int n) {
  // rational homology spheres L_n: identical base diagram for every n
  SlicedDiagram d;
  d.base.push_back(indef(0, RadialSign::TowardSouth));
  d.seed = {2, 1};
  std::ostringstream nm;
  nm << "ln_sblf(" << n << ")";
  d.meta.set("name", nm.str());
  d.meta.set("n", std::to_string(n));
  d.meta.set("connected", "1");
  return d;
}

SlicedDiagram honest_lf(int genus, int k, const std::string& name) {
  SlicedDiagram d;
  d.seed = {2 - 2 * genus, 1};
  for (int i = 0; i < k; ++i) d.marks.push_back({0, 0});
  d.meta.set("name", name);
  d.meta.set("connected", "1");
  return d;
}

SlicedDiagram s1xy_heegaard(int g) {
  // id x (Heegaard Morse function) on S^1 x Y: two definite circles at the
  // extremes, g index-1 circles directed south, g index-2 circles directed
  // north, highest genus fiber over the middle.
  SlicedDiagram d;
  int id = 0;
  d.base.push_back(defc(100, RadialSign::TowardSouth));
  for (int i = 0; i < g; ++i)
    d.base.push_back(indef(id++, RadialSign::TowardSouth));
  for (int i = 0; i < g; ++i)
    d.base.push_back(indef(id++, RadialSign::TowardNorth));
  d.base.push_back(defc(101, RadialSign::TowardNorth));
  d.seed = {0, 0};
  std::ostringstream nm;
  nm << "s1xy_heegaard(" << g << ")";
  d.meta.set("name", nm.str());
  d.meta.set("connected", "1");
  return d;
}

}  // namespace

std::optional<SlicedDiagram> example(const std::string& name) {
  auto paren = name.find('(');
  std::string head = name.substr(0, paren);
  int arg = 0;
  if (paren != std::string::npos) {
    auto close = name.find(')', paren);
    if (close == std::string::npos) return std::nullopt;
    try {
      arg = std::stoi(name.substr(paren + 1, close - paren - 1));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (head == "torus_bundle") return torus_bundle();
  if (head == "eye") return eye();
  if (head == "s4_sblf") return s4_sblf();
  if (head == "ln_sblf") return ln_sblf(paren == std::string::npos ? 2 : arg);
  if (head == "e1_lefschetz") return honest_lf(1, 12, "e1_lefschetz");
  if (head == "sigma_g_s2") {
    std::ostringstream nm;
    nm << "sigma_g_s2(" << arg << ")";
    return honest_lf(arg, 0, nm.str());
  }
  if (head == "dolgachev_like_genus2_k14")
    return honest_lf(2, 14, "dolgachev_like_genus2_k14");
  if (head == "fs_genus4_k24") return honest_lf(4, 24, "fs_genus4_k24");
  if (head == "s1xy_heegaard") return s1xy_heegaard(arg);
  return std::nullopt;
}

std::vector<std::string> example_names() {
  return {"torus_bundle",
          "eye",
          "s4_sblf",
          "ln_sblf(2)",
          "e1_lefschetz",
          "sigma_g_s2(0)",
          "sigma_g_s2(1)",
          "sigma_g_s2(2)",
          "sigma_g_s2(3)",
          "dolgachev_like_genus2_k14",
          "fs_genus4_k24",
          "s1xy_heegaard(1)",
          "s1xy_heegaard(2)"};
}

}  // namespace bdf

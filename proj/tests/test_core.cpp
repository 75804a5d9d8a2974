#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdf/diagram.hpp"
#include "bdf/format.hpp"
#include "bdf/invariants.hpp"

using namespace bdf;

namespace {

SlicedDiagram torus_bundle() {
  SlicedDiagram d;
  d.seed = {0, 1};
  return d;
}

// one outward (sign S) circle, sphere outside at the south, torus inside
SlicedDiagram s4_circle() {
  SlicedDiagram d;
  StrandAttr a;
  a.id = 0;
  a.sign = RadialSign::TowardSouth;
  d.base.push_back(a);
  d.seed = {2, 1};
  return d;
}

SlicedDiagram eye(int seed_chi = 0, int seed_comp = 1) {
  SlicedDiagram d;
  d.seed = {seed_chi, seed_comp};
  d.events.push_back({EventTag::CuspL, 0, RadialSign::TowardNorth});
  d.events.push_back({EventTag::CuspR, 0, RadialSign::TowardNorth});
  return d;
}

SlicedDiagram lefschetz(int genus, int k) {
  SlicedDiagram d;
  d.seed = {2 - 2 * genus, 1};
  for (int i = 0; i < k; ++i) d.marks.push_back({0, 0});
  return d;
}

}  // namespace

TEST_CASE("torus bundle: closure vacuous, chi = 0") {
  auto d = torus_bundle();
  CHECK(validate(d).ok);
  CHECK(euler_characteristic(d) == 0);
  Sweep s;
  CHECK(!sweep(d, s));
  CHECK(s.region_count == 1);
  CHECK(s.region_fiber[0] == FiberClass{0, 1});
}

TEST_CASE("single open strand cannot close") {
  SlicedDiagram d;
  StrandAttr a;
  a.id = 0;
  a.sign = RadialSign::TowardNorth;
  d.base.push_back(a);
  d.events.push_back({EventTag::Cross, 0, RadialSign::TowardNorth});
  d.seed = {2, 1};
  auto rep = validate(d);
  CHECK(!rep.ok);
}

TEST_CASE("eye diagram: regions and chi") {
  auto d = eye();
  REQUIRE(validate(d).ok);
  Sweep s;
  REQUIRE(!sweep(d, s));
  CHECK(s.region_count == 2);
  // interior euler = -2, exterior 0
  int interior = s.regions[0][1];
  CHECK(s.region_fiber[interior].euler == -2);
  CHECK(euler_characteristic(d) == 0);
  CHECK(s.component_count == 1);
  CHECK(s.component_cusps[0] == 2);
}

TEST_CASE("S4 genus-1 broken fibration: chi = 2") {
  auto d = s4_circle();
  REQUIRE(validate(d).ok);
  CHECK(euler_characteristic(d) == 2);
  auto r = classify(d);
  CHECK(r.chi == 2);
  CHECK(r.round_components == 1);
  CHECK(r.is_directed);
  CHECK(r.is_embedded);
  CHECK(r.is_fiber_connected);
  CHECK(r.is_simplified_blf);
  CHECK(r.genus_high == 1);
  CHECK(r.genus_low == 0);
}

TEST_CASE("honest Lefschetz fibrations: chi = 2(2-2g)+k") {
  for (int g = 0; g <= 5; ++g)
    for (int k = 0; k <= 20; ++k) {
      auto d = lefschetz(g, k);
      REQUIRE(validate(d).ok);
      CHECK(euler_characteristic(d) == 2 * (2 - 2 * g) + k);
    }
}

TEST_CASE("E(1): genus-1 with 12 marks has chi 12") {
  auto d = lefschetz(1, 12);
  CHECK(euler_characteristic(d) == 12);
  auto r = classify(d);
  CHECK(r.is_simplified_blf);  // honest fibrations are simplified (l = 0)
}

TEST_CASE("inward circle is directed about the other pole") {
  SlicedDiagram d;
  StrandAttr a;
  a.id = 0;
  a.sign = RadialSign::TowardNorth;
  d.base.push_back(a);
  d.seed = {0, 1};  // torus below, sphere above
  REQUIRE(validate(d).ok);
  auto r = classify(d);
  CHECK(r.is_directed);
  CHECK(r.directed_pole == 'S');
}

TEST_CASE("sweep closure failure: sign does not persist") {
  SlicedDiagram d;
  StrandAttr a;
  a.id = 0;
  a.sign = RadialSign::TowardNorth;
  StrandAttr b;
  b.id = 1;
  b.sign = RadialSign::TowardSouth;
  d.base = {a, b};
  d.events.push_back({EventTag::Cross, 0, RadialSign::TowardNorth});
  d.seed = {2, 1};
  CHECK(!validate(d).ok);
}

TEST_CASE("definite circle fences an empty cap") {
  SlicedDiagram d;
  StrandAttr def;
  def.id = 0;
  def.kind = StrandKind::Definite;
  def.sign = RadialSign::TowardSouth;  // collapse southward
  d.base.push_back(def);
  d.seed = {0, 0};
  REQUIRE(validate(d).ok);
  Sweep s;
  REQUIRE(!sweep(d, s));
  CHECK(s.region_fiber[s.north_region] == FiberClass{2, 1});
  CHECK(euler_characteristic(d) == 2);  // S4 as the (0,0)-trisection
  auto tri = trisection_params(d);
  REQUIRE(tri.params.has_value());
  CHECK(tri.params->g == 0);
  CHECK(tri.params->k == 0);
}

TEST_CASE("untwisted parity check") {
  auto d = s4_circle();
  d.base[0].twist = Twist::Twisted;
  d.meta.set("b1", "0");
  d.meta.set("b2plus", "0");
  auto r = untwisted_parity_check(d);
  REQUIRE(r.has_value());
  CHECK(*r == true);  // 0 untwisted = 1+0+0 mod 2
  d.base[0].twist = Twist::Untwisted;
  r = untwisted_parity_check(d);
  REQUIRE(r.has_value());
  CHECK(*r == false);
  d.meta.set("b2plus", "1");
  CHECK(*untwisted_parity_check(d) == true);
}

TEST_CASE("format round trip on a mixed diagram") {
  SlicedDiagram d;
  StrandAttr a;
  a.id = 0;
  a.sign = RadialSign::TowardSouth;
  a.twist = Twist::Untwisted;
  d.base.push_back(a);
  StrandAttr b;
  b.id = 1;
  b.sign = RadialSign::TowardNorth;
  b.effect = ComponentEffect::Separating;
  d.base.push_back(b);
  d.events.push_back({EventTag::Cross, 0, RadialSign::TowardNorth});
  d.events.push_back({EventTag::Cross, 0, RadialSign::TowardNorth});
  d.marks.push_back({1, 2});
  d.seed = {2, 1};
  d.meta.set("name", "fixture");

  std::string text = serialize(d);
  auto p = parse(text);
  REQUIRE(p);
  CHECK(p.doc->diagram == d);
  CHECK(serialize(p.doc->diagram) == text);
}

TEST_CASE("format: canonical ordering of permuted sections") {
  std::string v1 =
      "bdf 1\n"
      "seed chi=0 comp=1\n"
      "meta name=x\n"
      "strand 0 kind=indef sign=S\n";
  std::string v2 =
      "bdf 1\n"
      "strand 0 kind=indef sign=S\n"
      "meta name=x\n"
      "seed chi=0 comp=1\n";
  auto p1 = parse(v1), p2 = parse(v2);
  REQUIRE(p1);
  REQUIRE(p2);
  CHECK(serialize(*p1.doc) == serialize(*p2.doc));
}

TEST_CASE("format: positioned errors") {
  auto p = parse("bdf 2\n");
  REQUIRE(!p);
  CHECK(p.error->line == 1);
  p = parse("bdf 1\nstrand x kind=indef sign=N\nseed chi=0 comp=1\n");
  REQUIRE(!p);
  CHECK(p.error->line == 2);
}

TEST_CASE("defcircle round trip") {
  std::string text =
      "bdf 1\n"
      "strand 0 kind=indef sign=S\n"
      "defcircle 0 collapse=S\n"
      "seed chi=0 comp=0\n";
  auto p = parse(text);
  REQUIRE(p);
  REQUIRE(p.doc->diagram.base.size() == 2);
  CHECK(p.doc->diagram.base[0].kind == StrandKind::Definite);
  CHECK(serialize(*p.doc) ==
        "bdf 1\nstrand 0 kind=indef sign=S\ndefcircle 0 collapse=S\n"
        "seed chi=0 comp=0\n");
}

TEST_CASE("isotopy: wiggle cancellation") {
  SlicedDiagram d = s4_circle();
  // add an S-wiggle to the circle
  d.events.push_back({EventTag::Min, 0, RadialSign::TowardNorth});
  d.events.push_back({EventTag::Max, 1, RadialSign::TowardSouth});
  REQUIRE(validate(d).ok);
  CHECK(euler_characteristic(d) == 2);
  auto nf = isotopy_normal_form(d);
  CHECK(nf.events.empty());
  CHECK(classify(d).is_directed);
}

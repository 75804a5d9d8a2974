#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bdf {

enum class StrandKind : uint8_t { Indefinite, Definite };

// Radial direction of the normal arrow on a theta-transverse strand segment.
// The arrow points from the higher-genus side to the lower-genus side.
enum class RadialSign : uint8_t { TowardNorth, TowardSouth };

// Effect of the fiberwise 2-handle on fiber components when crossing the fold
// in arrow direction.
enum class ComponentEffect : uint8_t { Nonseparating, Separating };

enum class Twist : uint8_t { Untwisted, Twisted };

inline RadialSign opposite(RadialSign s) {
  return s == RadialSign::TowardNorth ? RadialSign::TowardSouth
                                      : RadialSign::TowardNorth;
}

struct StrandAttr {
  int id = 0;
  StrandKind kind = StrandKind::Indefinite;
  RadialSign sign = RadialSign::TowardSouth;  // for definite: collapse direction
  ComponentEffect effect = ComponentEffect::Nonseparating;
  std::optional<Twist> twist;

  friend bool operator==(const StrandAttr&, const StrandAttr&) = default;
};

enum class EventTag : uint8_t { Cross, Min, Max, CuspL, CuspR };

// One elementary slice transition, at its own angular position. Positions are
// indices into the slice, counted south to north over all strands (definite
// included). Cross swaps (i, i+1). Min and CuspL insert a pair at (i, i+1).
// Max and CuspR delete the pair at (i, i+1). CuspL opens its wedge toward
// increasing theta, CuspR toward decreasing theta; the born or dying pair at a
// cusp always carries (lower=TowardSouth, upper=TowardNorth). At Min/Max the
// upper branch carries `upper`, the lower branch the opposite sign.
struct Event {
  EventTag tag = EventTag::Cross;
  int pos = 0;
  RadialSign upper = RadialSign::TowardNorth;  // Min/Max only

  friend bool operator==(const Event&, const Event&) = default;
};

struct LefschetzMark {
  int after_event = 0;  // mark lives in the interval following this event
  int gap = 0;          // radial gap index, 0 = south of everything
  friend bool operator==(const LefschetzMark&, const LefschetzMark&) = default;
};

// Fiber class of a region: Euler characteristic and component count of the
// regular fiber. The empty fiber is (0, 0).
struct FiberClass {
  int euler = 0;
  int components = 1;
  friend bool operator==(const FiberClass&, const FiberClass&) = default;
};

struct Metadata {
  std::map<std::string, std::string> kv;

  std::optional<std::string> get(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> get_int(const std::string& k) const;
  void set(const std::string& k, const std::string& v) { kv[k] = v; }
  bool connected() const { return get("connected").value_or("0") == "1"; }
  friend bool operator==(const Metadata&, const Metadata&) = default;
};

// A base diagram of an indefinite fibration in sliced form: the annulus
// between the south and north poles, swept by increasing theta. base holds the
// slice at theta = 0 in south-to-north order; events are listed in increasing
// angular order (angles themselves are immaterial).
struct SlicedDiagram {
  std::vector<StrandAttr> base;
  std::vector<Event> events;
  std::vector<LefschetzMark> marks;
  FiberClass seed;  // fiber class of the region containing the south pole
  Metadata meta;

  int width_at_start() const { return static_cast<int>(base.size()); }
  int event_count() const { return static_cast<int>(events.size()); }
  int interval_count() const { return events.empty() ? 1 : event_count(); }

  friend bool operator==(const SlicedDiagram&, const SlicedDiagram&) = default;
};

// Slice width just after applying the first `k` events.
int slice_width_after(const SlicedDiagram& d, int k);

struct ValidationIssue {
  std::string rule;   // name of the violated invariant
  int event = -1;     // offending event index, -1 if none
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  explicit operator bool() const { return ok; }
  std::string summary() const;
};

ValidationReport validate(const SlicedDiagram& d);

// ---- sweep machinery -------------------------------------------------------

// Tokens identify strand segments through the sweep; the first base.size()
// tokens are the base strands.
struct SweepStrand {
  int token = -1;
  StrandAttr attr;
};

// Fully swept structure: per-interval slices, round-locus components, region
// partition with fiber labels.
struct Sweep {
  // slice[t] = strand list valid on the interval after event t-1 and before
  // event t; slice[0] is the base slice. There are events+1 entries, the last
  // equal to the closing slice (must match base for a valid diagram).
  std::vector<std::vector<SweepStrand>> slices;
  std::vector<StrandAttr> token_attr;        // per token
  std::vector<int> token_component;          // per token -> component id
  int component_count = 0;                   // indefinite round components
  std::vector<int> component_cusps;          // per component
  std::vector<ComponentEffect> component_effect;
  std::vector<std::optional<Twist>> component_twist;
  std::vector<bool> component_winding;       // crosses theta=0 slice
  int definite_count = 0;

  // region ids: regions[t][b] = region of band b (gap index) on interval t.
  std::vector<std::vector<int>> regions;
  int region_count = 0;
  std::vector<FiberClass> region_fiber;
  std::vector<int> region_chi_c;             // compactly supported Euler char
  int south_region = 0;                      // region containing south pole
  int north_region = 0;

  int marks_in(int region, const SlicedDiagram& d) const;
};

struct SweepError {
  std::string rule;
  int event = -1;
  std::string detail;
};

// Sweeps the diagram. Returns error if slice bookkeeping or label propagation
// fails; a diagram passing validate() always sweeps.
std::optional<SweepError> sweep(const SlicedDiagram& d, Sweep& out);

// Region adjacency edge: fold arcs as directed edges, higher side -> lower.
struct RegionEdge {
  int higher = 0;
  int lower = 0;
};

std::vector<RegionEdge> region_adjacency(const SlicedDiagram& d,
                                         const Sweep& s);

// chi(X) by stratified multiplicativity over regions, fold arcs, cusps,
// crossings and Lefschetz marks.
int euler_characteristic(const SlicedDiagram& d);
int euler_characteristic(const SlicedDiagram& d, const Sweep& s);

}  // namespace bdf

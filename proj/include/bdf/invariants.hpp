#pragma once

#include <optional>
#include <utility>

#include "bdf/diagram.hpp"

namespace bdf {

struct TrisectionParams {
  int g = 0;
  int k = 0;
  friend bool operator==(const TrisectionParams&,
                         const TrisectionParams&) = default;
};

struct InvariantReport {
  int chi = 0;
  int round_components = 0;  // indefinite round-locus components
  int lefschetz_count = 0;
  int cusp_count = 0;
  int crossing_count = 0;
  int definite_circles = 0;
  std::optional<int> genus_high;
  std::optional<int> genus_low;
  bool is_directed = false;
  std::optional<char> directed_pole;  // 'N': arrows point south (center north)
  bool is_embedded = false;
  bool is_fiber_connected = false;
  bool is_simplified_blf = false;
  bool is_simplified_trisection = false;
  std::optional<TrisectionParams> trisection;
  std::optional<int> untwisted_parity;  // #untwisted mod 2, when defined

  friend bool operator==(const InvariantReport&,
                         const InvariantReport&) = default;
};

InvariantReport classify(const SlicedDiagram& d);

enum class TrisectionError { NotATrisection, SectorMismatch };

// g' = indefinite fold arcs per sector, k' = cusp-free arcs per sector.
struct TrisectionResult {
  std::optional<TrisectionParams> params;
  std::optional<TrisectionError> error;
};
TrisectionResult trisection_params(const SlicedDiagram& d);

// Prop on untwisted components: #untwisted = 1 + b1 + b2+ (mod 2).
// Empty result when twist bits or metadata are absent or cusps present.
std::optional<bool> untwisted_parity_check(const SlicedDiagram& d);

// --- isotopy normalization (used by the directedness predicate and the
// isotopy moves) -------------------------------------------------------------

// True if events e and e+1 act on disjoint position ranges; `d` is rewritten
// with the two events exchanged and indices adjusted.
bool commute_events(SlicedDiagram& d, int e);

// Detects an S-wiggle [insert@e, delete@e+1] of a single smooth strand and
// removes it. Cusped pairs and fold-merge patterns are left alone.
bool cancel_wiggle(SlicedDiagram& d, int e);

// Slides a crossing around an adjacent smooth extremum tip (an isotopy of the
// base diagram that exchanges which branch carries the crossing).
bool tip_pass(SlicedDiagram& d, int e);

// Cancels wiggles after commuting events together; marks are preserved.
SlicedDiagram isotopy_normal_form(const SlicedDiagram& d);

// Kink: a cusp on a winding strand, encoded as an adjacent [insert, delete]
// event pair of which exactly one is a cusp event.
struct Kink {
  int first_event = 0;   // insert event
  int second_event = 0;  // delete event
  bool cusp_first = false;
  int component = -1;
};
std::vector<Kink> find_kinks(const SlicedDiagram& d);

// Directedness for a fixed pole choice. 'N' means the round image is directed
// away from the north pole: all strands toward_south except kink interiors,
// and every non-Cross event belongs to a cusp kink, a standalone cusp pair is
// not accepted.
bool is_directed_for_pole(const SlicedDiagram& d, char pole);

}  // namespace bdf

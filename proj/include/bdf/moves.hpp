#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdf/diagram.hpp"
#include "bdf/invariants.hpp"

namespace bdf {

enum class MoveKind : uint8_t {
  Birth,
  Death,
  Flip,
  Unflip,
  CuspMerge,
  FoldMerge,
  Sink,
  Unsink,
  Wrinkle,
  Unwrinkle,
  Push,
  Pull,
  R2u0,  // remove a bigon with 0 inward arrows
  R2u1,  // remove, 1 inward
  R2u2,  // remove, 2 inward (gated)
  R2d0,  // create a bigon with 0 inward arrows (gated)
  R2d1,  // create, 1 inward (gated)
  R2d2,  // create, 2 inward
  R3d0,
  R3d1,
  R3d2,
  R3d3,
  CMove,
  CInverse,
  FlipAndSlip,
  Exchange,
  CrissCross,
  DefiniteFlipAndSlip,
  KinkRemoval,
  IsotopyCommute,
  IsotopyCancelPair,
  IsotopyPoleSlide,
};

enum class Legality : uint8_t { AlwaysRealizable, Conditional, Gated };

Legality legality(MoveKind m);
const char* move_name(MoveKind m);
std::optional<MoveKind> move_from_name(const std::string& s);

bool is_composite(MoveKind m);
// Primitive decomposition of a composite move, as documented by its source.
std::vector<MoveKind> expand_composite(MoveKind m, int unsinks = 4);

struct MoveSite {
  int event = -1;    // primary event anchor
  int event2 = -1;   // secondary event anchor
  int pos = -1;      // radial position or gap
  int mark = -1;     // mark index
  int strand = -1;   // base strand index
  int count = 4;     // unsink count for FlipAndSlip (0..4)
  bool mirror = false;
  std::optional<Twist> twist_out;

  std::string to_string() const;
  static std::optional<MoveSite> parse(const std::string& s);
  friend bool operator==(const MoveSite&, const MoveSite&) = default;
};

struct ScriptEntry {
  MoveKind kind = MoveKind::Birth;
  MoveSite site;
  Legality legality = Legality::AlwaysRealizable;
  bool override_used = false;
  std::vector<std::string> obligations;
};

struct MoveScript {
  InvariantReport initial;
  InvariantReport final;
  std::vector<ScriptEntry> entries;

  std::string serialize() const;
  static std::optional<MoveScript> parse(const std::string& text);
};

enum class ApplyErrorKind {
  GatedRefused,
  HypothesisUnmet,
  PatternMismatch,
  InvalidDiagram,
};

struct ApplyError {
  ApplyErrorKind kind = ApplyErrorKind::PatternMismatch;
  std::string detail;
};

struct ApplyResult {
  std::optional<SlicedDiagram> out;
  ScriptEntry entry;
  std::optional<ApplyError> error;
  explicit operator bool() const { return out.has_value(); }
};

std::vector<MoveSite> enumerate_sites(const SlicedDiagram& d, MoveKind m);

ApplyResult apply(const SlicedDiagram& d, MoveKind m, const MoveSite& s,
                  bool override_gate = false);

enum class ReplayErrorKind { InitialMismatch, StepFailed, FinalMismatch };
struct ReplayError {
  ReplayErrorKind kind;
  int step = -1;
  std::string detail;
};
struct ReplayResult {
  std::optional<SlicedDiagram> out;
  std::optional<ReplayError> error;
};
ReplayResult apply_script(const SlicedDiagram& d, const MoveScript& script);

}  // namespace bdf

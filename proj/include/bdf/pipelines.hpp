#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdf/diagram.hpp"
#include "bdf/invariants.hpp"
#include "bdf/moves.hpp"

namespace bdf {

struct Postcondition {
  std::string name;
  bool pass = false;
};

struct PipelineResult {
  SlicedDiagram output;
  MoveScript script;
  InvariantReport report;
  std::vector<Postcondition> postconditions;
  std::optional<std::string> error;

  bool ok() const {
    if (error) return false;
    for (const auto& p : postconditions)
      if (!p.pass) return false;
    return true;
  }
};

// Theorem-level pipelines. Each returns the transformed diagram, the full
// move script, and a postcondition report.
PipelineResult direct(const SlicedDiagram& d);
PipelineResult embed(const SlicedDiagram& d);
PipelineResult connect(const SlicedDiagram& d);
PipelineResult simplify(const SlicedDiagram& d);
PipelineResult wrinkle_all(const SlicedDiagram& d);
PipelineResult realize(const SlicedDiagram& d, const std::vector<Twist>& targets);
PipelineResult blf_to_trisection(const SlicedDiagram& d);
PipelineResult trisection_to_blf(const SlicedDiagram& d);
PipelineResult heegaard_to_trisection(int genus);
PipelineResult heegaard_to_blf(int genus);

// Resource guard for intermediate blow-up.
struct PipelineLimits {
  int max_strands = 64;
  int max_events = 4096;
};
PipelineLimits& pipeline_limits();

}  // namespace bdf

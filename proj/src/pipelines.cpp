#include "bdf/pipelines.hpp"

namespace bdf {

PipelineLimits& pipeline_limits() {
  static PipelineLimits lim;
  return lim;
}

namespace {

PipelineResult not_ready(const SlicedDiagram& d, const char* which) {
  PipelineResult r;
  r.output = d;
  r.error = std::string(which) + ": not implemented";
  return r;
}

}  // namespace

PipelineResult direct(const SlicedDiagram& d) { return not_ready(d, "direct"); }
PipelineResult embed(const SlicedDiagram& d) { return not_ready(d, "embed"); }
PipelineResult connect(const SlicedDiagram& d) {
  return not_ready(d, "connect");
}
PipelineResult simplify(const SlicedDiagram& d) {
  return not_ready(d, "simplify");
}
PipelineResult wrinkle_all(const SlicedDiagram& d) {
  return not_ready(d, "wrinkle_all");
}
PipelineResult realize(const SlicedDiagram& d, const std::vector<Twist>&) {
  return not_ready(d, "realize");
}
PipelineResult blf_to_trisection(const SlicedDiagram& d) {
  return not_ready(d, "blf_to_trisection");
}
PipelineResult trisection_to_blf(const SlicedDiagram& d) {
  return not_ready(d, "trisection_to_blf");
}
PipelineResult heegaard_to_trisection(int) {
  SlicedDiagram d;
  return not_ready(d, "heegaard_to_trisection");
}
PipelineResult heegaard_to_blf(int) {
  SlicedDiagram d;
  return not_ready(d, "heegaard_to_blf");
}

}  // namespace bdf

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdf/diagram.hpp"

namespace bdf {

// Bundled example diagrams. Parametric names take the form "name" or
// "name(3)".
std::optional<SlicedDiagram> example(const std::string& name);
std::vector<std::string> example_names();

}  // namespace bdf

#pragma once

#include <string>

#include "qdivlab/states.hpp"

namespace qdivlab {

// Accepts {"dim", "re", "im"}, {"bloch": [x, y, z]} or {"diag": [p...]}.
DensityMatrix parse_state_json(const std::string& text, const Tolerances& tol = default_tolerances());
DensityMatrix read_state_file(const std::string& path, const Tolerances& tol = default_tolerances());
std::string state_to_json(const DensityMatrix& rho);

}  // namespace qdivlab

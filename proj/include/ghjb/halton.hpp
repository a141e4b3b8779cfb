#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "ghjb/polynomial.hpp"

namespace ghjb {

// Radical-inverse Halton sequence; deterministic quasi-random sampling for
// admissibility and registration checks.
double halton(std::uint64_t index, int base);

// Point index of the dim-dimensional Halton sequence (first dim primes),
// mapped into the box. Index 0 maps to the box center.
Eigen::VectorXd halton_in_box(std::uint64_t index, const Box& box);

}  // namespace ghjb

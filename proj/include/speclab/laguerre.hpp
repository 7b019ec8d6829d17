#pragma once

#include <cstddef>

#include "speclab/types.hpp"

namespace speclab {

/// Values of the orthonormal Laguerre functions sqrt(2) L_j(2x) e^{-x},
/// j = 0..count-1, by the three-term recurrence with the exponential factor
/// carried through (keeps intermediates bounded for large j and x).
void laguerre_basis_values(std::size_t count, double x, Vec& out);

/// Single Laguerre polynomial L_k(t) by recurrence.
double laguerre_poly(std::size_t k, double t);

}  // namespace speclab

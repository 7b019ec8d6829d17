#include "speclab/laguerre.hpp"

#include <cmath>

namespace speclab {

// g_j = L_j(2x) e^{-x} by the three-term recurrence with power-of-two
// renormalization. For x far beyond the turning point 2j+1 the early g_j are
// far below the denormal range while later ones re-enter it, so the
// recurrence carries a separate binary exponent.
void laguerre_basis_values(std::size_t count, double x, Vec& out) {
    out.resize(count);
    if (count == 0) return;
    const double root2 = std::sqrt(2.0);

    // e^{-x} = m * 2^shift with m in [1, 2)
    const double e = -x * 1.4426950408889634;  // -x * log2(e)
    long shift = static_cast<long>(std::floor(e));
    double g0 = std::exp2(e - static_cast<double>(shift));

    out[0] = root2 * std::ldexp(g0, static_cast<int>(shift));
    if (count == 1) return;

    double g1 = (1.0 - 2.0 * x) * g0;
    out[1] = root2 * std::ldexp(g1, static_cast<int>(shift));

    for (std::size_t j = 1; j + 1 < count; ++j) {
        const double jj = static_cast<double>(j);
        const double g2 = ((2.0 * jj + 1.0 - 2.0 * x) * g1 - jj * g0) / (jj + 1.0);
        g0 = g1;
        g1 = g2;
        const double mag = std::max(std::abs(g0), std::abs(g1));
        if (mag > 0x1p+500) {
            g0 = std::ldexp(g0, -512);
            g1 = std::ldexp(g1, -512);
            shift += 512;
        } else if (mag > 0.0 && mag < 0x1p-500) {
            g0 = std::ldexp(g0, 512);
            g1 = std::ldexp(g1, 512);
            shift -= 512;
        }
        out[j + 1] = root2 * std::ldexp(g1, static_cast<int>(shift));
    }
}

double laguerre_poly(std::size_t k, double t) {
    double p0 = 1.0;
    if (k == 0) return p0;
    double p1 = 1.0 - t;
    for (std::size_t j = 1; j < k; ++j) {
        const double jj = static_cast<double>(j);
        const double p2 = ((2.0 * jj + 1.0 - t) * p1 - jj * p0) / (jj + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace speclab

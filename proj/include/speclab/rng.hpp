#pragma once

#include <cstdint>
#include <random>

#include "speclab/types.hpp"

namespace speclab {

/// Seeded generator with a hand-rolled Box-Muller normal so that streams are
/// reproducible independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        const double u = (engine_() >> 11) * 0x1.0p-53;  // [0,1)
        return lo + (hi - lo) * u;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t bits() { return engine_(); }

    Vec normal_vec(std::size_t n) {
        Vec v(n);
        for (double& x : v) x = normal();
        return v;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Dense random symmetric matrix with entries ~ N(0, 1/n), symmetrized.
SymOp random_symmetric(std::size_t n, Rng& rng);

/// k orthonormal vectors of dimension n from Gram-Schmidt on Gaussian draws.
std::vector<Vec> random_orthonormal(std::size_t n, std::size_t k, Rng& rng);

Vec random_unit_vec(std::size_t n, Rng& rng);

}  // namespace speclab

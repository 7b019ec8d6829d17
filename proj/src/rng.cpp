#include "speclab/rng.hpp"

#include <cmath>

namespace speclab {

SymOp random_symmetric(std::size_t n, Rng& rng) {
    Mat m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = scale * rng.normal();
    return SymOp::symmetrized(m);
}

std::vector<Vec> random_orthonormal(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw BadParams("random_orthonormal: k > n");
    std::vector<Vec> basis;
    basis.reserve(k);
    int attempts = 0;
    while (basis.size() < k) {
        if (++attempts > static_cast<int>(8 * k + 16))
            throw BadParams("random_orthonormal: degenerate draws");
        Vec v = rng.normal_vec(n);
        for (const Vec& b : basis) axpy(-dot(b, v), b, v);
        for (const Vec& b : basis) axpy(-dot(b, v), b, v);
        const double nv = norm2(v);
        if (nv < 1e-8) continue;
        for (double& x : v) x /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

Vec random_unit_vec(std::size_t n, Rng& rng) {
    Vec v = rng.normal_vec(n);
    double nv = norm2(v);
    while (nv < 1e-12) {
        v = rng.normal_vec(n);
        nv = norm2(v);
    }
    for (double& x : v) x /= nv;
    return v;
}

}  // namespace speclab

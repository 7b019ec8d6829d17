#include "speclab/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace speclab {

namespace {

// Householder reduction to tridiagonal form, accumulating the orthogonal
// transform in z. On exit d holds the diagonal, e the subdiagonal (e[0] unused).
void householder_tridiag(Mat& z, Vec& d, Vec& e) {
    const int n = static_cast<int>(z.rows());
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) {
            z(j, i) = 0.0;
            z(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of z.
// max_sweeps bounds the sweeps spent on any single eigenvalue.
void tridiag_ql(Vec& d, Vec& e, Mat& z, int max_sweeps) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps) {
                    double res = 0.0;
                    for (int k = 0; k < n - 1; ++k) res = std::max(res, std::abs(e[k]));
                    throw EigFailure(res);
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

Vec EigSystem::column(std::size_t i) const {
    Vec v(order());
    for (std::size_t k = 0; k < order(); ++k) v[k] = vectors(k, i);
    return v;
}

double EigSystem::spectral_radius() const {
    double r = 0.0;
    for (double v : values) r = std::max(r, std::abs(v));
    return r;
}

EigSystem eig_sym(const SymOp& a, int max_sweeps) {
    const std::size_t n = a.order();
    if (n == 0) throw BadParams("eig_sym: empty operator");

    Mat z = a.matrix();
    Vec d, e;
    householder_tridiag(z, d, e);
    tridiag_ql(d, e, z, max_sweeps);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&d](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    EigSystem out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = z(i, idx[j]);
    }
    return out;
}

double default_tie_tol(const EigSystem& e) {
    return 1e-9 * (1.0 + e.spectral_radius());
}

Projector spectral_projector(const EigSystem& e, double lambda, IntervalKind kind,
                             TiePolicy policy, double tie_tol) {
    if (tie_tol < 0.0) tie_tol = default_tie_tol(e);
    const std::size_t n = e.order();

    if (policy == TiePolicy::reject) {
        for (double v : e.values)
            if (std::abs(v - lambda) <= tie_tol) throw TieAtThreshold(v, lambda);
    }

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
        const bool in = (kind == IntervalKind::open_below) ? (e.values[i] < lambda)
                                                           : (e.values[i] <= lambda);
        if (in) members.push_back(i);
    }

    Mat p(n, n, 0.0);
    for (std::size_t idx : members) {
        for (std::size_t i = 0; i < n; ++i) {
            const double vi = e.vectors(i, idx);
            if (vi == 0.0) continue;
            for (std::size_t j = i; j < n; ++j) p(i, j) += vi * e.vectors(j, idx);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) p(j, i) = p(i, j);

    return Projector{SymOp::adopt_symmetric(std::move(p)), members.size()};
}

std::size_t numerical_kernel_dim(const EigSystem& e, double tau) {
    if (tau < 0.0) throw BadParams("numerical_kernel_dim: negative threshold");
    std::size_t k = 0;
    for (double v : e.values)
        if (std::abs(v) <= tau) ++k;
    return k;
}

std::size_t numerical_kernel_dim(const SymOp& a, double tau) {
    return numerical_kernel_dim(eig_sym(a), tau);
}

double default_kernel_tol(const EigSystem& e) {
    return static_cast<double>(e.order()) * std::numeric_limits<double>::epsilon() *
           e.spectral_radius();
}

double min_singular_value(const SymOp& a) {
    const EigSystem e = eig_sym(a);
    double m = std::numeric_limits<double>::infinity();
    for (double v : e.values) m = std::min(m, std::abs(v));
    return m;
}

std::size_t numerical_rank(const SymOp& a, double rel_tol) {
    const EigSystem e = eig_sym(a);
    const double scale = e.spectral_radius();
    if (scale == 0.0) return 0;
    std::size_t r = 0;
    for (double v : e.values)
        if (std::abs(v) > rel_tol * scale) ++r;
    return r;
}

SymOp reassemble(const EigSystem& e) { return assemble_in_basis(e, e.values); }

SymOp assemble_in_basis(const EigSystem& e, const Vec& coeffs) {
    const std::size_t n = e.order();
    if (coeffs.size() != n) throw BadParams("assemble_in_basis: size mismatch");
    Mat m(n, n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (coeffs[k] == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = coeffs[k] * e.vectors(i, k);
            for (std::size_t j = i; j < n; ++j) m(i, j) += w * e.vectors(j, k);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    return SymOp::adopt_symmetric(std::move(m));
}

}  // namespace speclab

#include "speclab/gallery.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/laguerre.hpp"
#include "speclab/rng.hpp"

namespace speclab {

namespace {

constexpr double kNystromLength = 40.0;
constexpr double kEntryRelTol = 1e-9;
constexpr std::size_t kDyadicLevels = 34;

// The basis functions sqrt(2) L_j(2x) e^{-x} oscillate out to the turning
// point 2j+1 and only then decay; the domain has to cover the largest turning
// point plus an Airy-width margin.
double laguerre_domain(std::size_t basis) {
    const double n = static_cast<double>(basis);
    return 2.0 * n + std::max(30.0, 8.0 * std::cbrt(2.0 * n));
}

PanelGrid galerkin_grid(std::size_t basis) {
    const std::size_t quad_panels = std::max<std::size_t>(8, (basis + 2) / 3);
    return sqrt_graded_grid(laguerre_domain(basis), quad_panels, 20, kDyadicLevels);
}

// Values of the orthonormal Laguerre functions at every grid node, one row
// per node.
Mat basis_at_nodes(const PanelGrid& g, std::size_t nbasis) {
    Mat phi(g.size(), nbasis);
    Vec tmp;
    for (std::size_t m = 0; m < g.size(); ++m) {
        laguerre_basis_values(nbasis, g.nodes[m], tmp);
        for (std::size_t j = 0; j < nbasis; ++j) phi(m, j) = tmp[j];
    }
    return phi;
}

struct KreinMatrices {
    Mat e0, e1;     // Galerkin matrices of the sinh and cosh kernels
    Vec phi_coeff;  // basis coefficients of e^{-x}
};

// Single assembly pass on a fixed grid. Both kernels split across the kink at
// y = x into exponentially weighted prefix/suffix integrals,
//   sinh(y) e^{-x} = (1 - e^{-2y})/2 * e^{-(x-y)},   y <= x,
//   sinh(x) e^{-y} = (1 - e^{-2x})/2 * e^{-(y-x)},   y >= x,
// (cosh with + signs), so every factor stays bounded regardless of the domain
// length. Prefix/suffix values propagate across panels by one-panel decay
// recurrences; the partial panel at each outer node gets a fresh Gauss rule.
KreinMatrices assemble_krein(const PanelGrid& g, std::size_t nbasis) {
    const std::size_t M = g.size(), N = nbasis, P = g.panels(), pts = g.pts;
    const Mat phi = basis_at_nodes(g, N);

    // Forward states at panel starts: PS/PC = int_0^{a_p} e^{-(a_p-y)} g(y) dy
    // with g = (1 -+ e^{-2y})/2 phi_j; backward states at panel ends:
    // RE = int_{b_p}^{L} e^{-(y-b_p)} phi_j dy.
    Mat ps(P + 1, N, 0.0), pc(P + 1, N, 0.0), re(P + 1, N, 0.0);
    for (std::size_t p = 0; p < P; ++p) {
        const double a = g.breaks[p], b = g.breaks[p + 1];
        const double decay = std::exp(-(b - a));
        for (std::size_t j = 0; j < N; ++j) {
            ps(p + 1, j) = decay * ps(p, j);
            pc(p + 1, j) = decay * pc(p, j);
        }
        for (std::size_t q = p * pts; q < (p + 1) * pts; ++q) {
            const double y = g.nodes[q], w = g.weights[q];
            const double half = 0.5 * std::exp(-(b - y)) * w;
            const double e2y = std::exp(-2.0 * y);
            const double ws = half * (1.0 - e2y), wc = half * (1.0 + e2y);
            const double* pr = phi.row_ptr(q);
            for (std::size_t j = 0; j < N; ++j) {
                ps(p + 1, j) += ws * pr[j];
                pc(p + 1, j) += wc * pr[j];
            }
        }
    }
    for (std::size_t p = P; p-- > 0;) {
        const double a = g.breaks[p], b = g.breaks[p + 1];
        const double decay = std::exp(-(b - a));
        for (std::size_t j = 0; j < N; ++j) re(p, j) = decay * re(p + 1, j);
        for (std::size_t q = p * pts; q < (p + 1) * pts; ++q) {
            const double y = g.nodes[q], w = g.weights[q];
            const double wq = w * std::exp(-(y - a));
            const double* pr = phi.row_ptr(q);
            for (std::size_t j = 0; j < N; ++j) re(p, j) += wq * pr[j];
        }
    }

    // Coefficients of e^{-x} in the basis (exact up to domain truncation).
    Vec tot_e(N, 0.0);
    for (std::size_t q = 0; q < M; ++q) {
        const double we = g.weights[q] * std::exp(-g.nodes[q]);
        const double* pr = phi.row_ptr(q);
        for (std::size_t j = 0; j < N; ++j) tot_e[j] += we * pr[j];
    }

    Vec rn, rw;
    gauss_legendre(pts, rn, rw);

    Mat e0(N, N, 0.0), e1(N, N, 0.0);
    Vec pn, pw, phiy, us(N), uc(N), vr(N), b0(N), b1(N);
    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t p = g.panel_of(m);
        const double a = g.breaks[p], b = g.breaks[p + 1];
        const double x = g.nodes[m];

        const double pdecay = std::exp(-(x - a));
        for (std::size_t j = 0; j < N; ++j) {
            us[j] = pdecay * ps(p, j);
            uc[j] = pdecay * pc(p, j);
        }
        map_to_interval(rn, rw, a, x, pn, pw);
        for (std::size_t q = 0; q < pn.size(); ++q) {
            const double y = pn[q];
            laguerre_basis_values(N, y, phiy);
            const double half = 0.5 * std::exp(-(x - y)) * pw[q];
            const double e2y = std::exp(-2.0 * y);
            const double ws = half * (1.0 - e2y), wc = half * (1.0 + e2y);
            for (std::size_t j = 0; j < N; ++j) {
                us[j] += ws * phiy[j];
                uc[j] += wc * phiy[j];
            }
        }

        const double sdecay = std::exp(-(b - x));
        for (std::size_t j = 0; j < N; ++j) vr[j] = sdecay * re(p + 1, j);
        map_to_interval(rn, rw, x, b, pn, pw);
        for (std::size_t q = 0; q < pn.size(); ++q) {
            const double y = pn[q];
            laguerre_basis_values(N, y, phiy);
            const double wq = pw[q] * std::exp(-(y - x));
            for (std::size_t j = 0; j < N; ++j) vr[j] += wq * phiy[j];
        }

        const double e2x = std::exp(-2.0 * x);
        const double cs = 0.5 * (1.0 - e2x), cc = 0.5 * (1.0 + e2x);
        for (std::size_t j = 0; j < N; ++j) {
            b0[j] = us[j] + cs * vr[j];
            b1[j] = uc[j] + cc * vr[j];
        }

        const double wm = g.weights[m];
        const double* pr = phi.row_ptr(m);
        for (std::size_t i = 0; i < N; ++i) {
            const double wphi = wm * pr[i];
            if (wphi == 0.0) continue;
            double* r0 = e0.row_ptr(i);
            double* r1 = e1.row_ptr(i);
            for (std::size_t j = 0; j < N; ++j) {
                r0[j] += wphi * b0[j];
                r1[j] += wphi * b1[j];
            }
        }
    }
    return {std::move(e0), std::move(e1), std::move(tot_e)};
}

// Carleman entries through the Laplace factorization of the kernel,
//   1/(x+y) = int_0^inf e^{-s(x+y)} ds,
// so that E = int ell(s) ell(s)^T ds with ell_j(s) the quadrature Laplace
// transform of phi_j. The s-line maps to u in [-1,1) by s = (1+u)/(1-u); in
// exact arithmetic the u-integrand is a polynomial of degree i+j.
Mat assemble_carleman(const PanelGrid& g, std::size_t nbasis, std::size_t s_points) {
    const std::size_t M = g.size(), N = nbasis;
    const Mat phi = basis_at_nodes(g, N);
    Mat wphi(M, N);
    for (std::size_t m = 0; m < M; ++m) {
        const double w = g.weights[m];
        for (std::size_t j = 0; j < N; ++j) wphi(m, j) = w * phi(m, j);
    }

    Vec un, uw;
    gauss_legendre(s_points, un, uw);

    Mat e(N, N, 0.0);
    Vec ell(N);
    for (std::size_t q = 0; q < s_points; ++q) {
        const double u = un[q];
        const double s = (1.0 + u) / (1.0 - u);
        const double jac = 2.0 / ((1.0 - u) * (1.0 - u));

        std::fill(ell.begin(), ell.end(), 0.0);
        for (std::size_t m = 0; m < M; ++m) {
            const double f = std::exp(-s * g.nodes[m]);
            if (f == 0.0) continue;
            const double* wp = wphi.row_ptr(m);
            for (std::size_t j = 0; j < N; ++j) ell[j] += f * wp[j];
        }

        const double c = uw[q] * jac;
        for (std::size_t i = 0; i < N; ++i) {
            const double ci = c * ell[i];
            if (ci == 0.0) continue;
            double* ei = e.row_ptr(i);
            for (std::size_t j = 0; j < N; ++j) ei[j] += ci * ell[j];
        }
    }
    return e;
}

double rel_change(const Mat& a, const Mat& b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
        scale = std::max(scale, std::abs(b.data()[i]));
    }
    return diff / (1.0 + scale);
}

double kernel_sinh(double x, double y) {
    const double lo = std::min(x, y), hi = std::max(x, y);
    return 0.5 * (1.0 - std::exp(-2.0 * lo)) * std::exp(-(hi - lo));
}

double kernel_cosh(double x, double y) {
    const double lo = std::min(x, y), hi = std::max(x, y);
    return 0.5 * (1.0 + std::exp(-2.0 * lo)) * std::exp(-(hi - lo));
}

PanelGrid nystrom_grid(const NystromParams& ny, std::size_t basis_size) {
    const std::size_t want = std::max(ny.grid, basis_size);
    const std::size_t pts = 16;
    const std::size_t panels = std::max<std::size_t>(4, (want + pts - 1) / pts);
    return uniform_grid(0.0, ny.length, panels, pts);
}

SymOp nystrom_matrix(const PanelGrid& g, double (*kernel)(double, double)) {
    const std::size_t M = g.size();
    Mat k(M, M);
    Vec sw(M);
    for (std::size_t m = 0; m < M; ++m) sw[m] = std::sqrt(g.weights[m]);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i; j < M; ++j) {
            const double v = sw[i] * kernel(g.nodes[i], g.nodes[j]) * sw[j];
            k(i, j) = v;
            k(j, i) = v;
        }
    return SymOp::adopt_symmetric(std::move(k));
}

double get_param(const OperatorSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

double require_param(const OperatorSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw BadParams("missing parameter '" + key + "' for family " +
                        family_name(spec.family));
    return it->second;
}

// Random finite-rank perturbation used for the single-operator families.
void attach_perturbation(OperatorPair& pair, const OperatorSpec& spec) {
    const std::size_t n = pair.T.order();
    const auto rank = static_cast<std::size_t>(get_param(spec, "perturb_rank", 1.0));
    const double alpha = get_param(spec, "perturb_alpha", 1.0);
    if (rank == 0) {
        pair.S = SymOp::zero(n);
        pair.rank_S = 0;
        return;
    }
    if (alpha == 0.0) throw BadParams("perturb_alpha must be nonzero");
    Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    pair.phi = random_orthonormal(n, rank, rng);
    pair.alphas.assign(rank, alpha);
    pair.S = rank_perturbation(pair.phi, pair.alphas);
    pair.rank_S = rank;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::DiagExample1: return "diag_example_one";
        case Family::DiagExample2: return "diag_example_two";
        case Family::KreinPair: return "krein_pair";
        case Family::Carleman: return "carleman";
        case Family::Jacobi: return "jacobi";
        case Family::AlmostMathieu: return "almost_mathieu";
        case Family::DiscreteSchrodinger: return "discrete_schrodinger";
        case Family::RandomSym: return "random_sym";
    }
    throw BadParams("unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "diag_example_one") return Family::DiagExample1;
    if (name == "diag_example_two") return Family::DiagExample2;
    if (name == "krein_pair") return Family::KreinPair;
    if (name == "carleman") return Family::Carleman;
    if (name == "jacobi") return Family::Jacobi;
    if (name == "almost_mathieu") return Family::AlmostMathieu;
    if (name == "discrete_schrodinger") return Family::DiscreteSchrodinger;
    if (name == "random_sym") return Family::RandomSym;
    throw BadParams("unknown family name '" + name + "'");
}

OperatorPair diag_example_one(std::size_t n, std::size_t N) {
    if (N < 1 || N >= n) throw BadParams("diag_example_one: requires 1 <= N < n");
    Vec t(n), s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) t[i] = -1.0 / static_cast<double>(i + 1);
    for (std::size_t i = 0; i < N; ++i) s[i] = -1.0;

    OperatorPair pair;
    pair.T = SymOp::diagonal(t);
    pair.S = SymOp::diagonal(s);
    pair.rank_S = N;
    for (std::size_t i = 0; i < N; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        pair.phi.push_back(std::move(e));
        pair.alphas.push_back(-1.0);
    }
    pair.meta = "diagonal pair; dims of the +1 eigenspace of D saturate the rank bound";
    return pair;
}

OperatorPair diag_example_two(std::size_t n) {
    if (n < 7) throw BadParams("diag_example_two: requires n >= 7");
    const double a0 = -1.0, a1 = -0.5;
    const double d0 = 0.5, d1 = 1.0 / 6.0;  // gaps |a0-a1| and |a1-a2|

    Vec t(n), s(n, 0.0);
    t[0] = a0;
    t[1] = a0 + d0 / 4.0;
    t[2] = a1;
    t[3] = a1 + d1 / 4.0;
    s[1] = -2.0 * (d0 / 4.0);
    s[3] = -2.0 * (d1 / 4.0);
    for (std::size_t i = 4; i < n; ++i) {
        const double denom = 5.0 + static_cast<double>((i - 4) / 2);
        if (i % 2 == 0) {
            t[i] = a0 + d0 / denom;
            s[i] = -2.0 * d0 / denom;
        } else {
            t[i] = a1 + d1 / denom;
            s[i] = -2.0 * d1 / denom;
        }
    }

    OperatorPair pair;
    pair.T = SymOp::diagonal(t);
    pair.S = SymOp::diagonal(s);
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] == 0.0) continue;
        Vec e(n, 0.0);
        e[i] = 1.0;
        pair.phi.push_back(std::move(e));
        pair.alphas.push_back(s[i]);
        ++pair.rank_S;
    }
    pair.meta = "diagonal pair with approach to -1 and -1/2 flipped by the perturbation";
    return pair;
}

OperatorPair krein_pair(std::size_t basis_size, DiscretizationScheme scheme) {
    if (basis_size < 2) throw BadParams("krein_pair: basis_size >= 2 required");

    OperatorPair pair;
    if (scheme.kind == DiscretizationScheme::laguerre_galerkin) {
        PanelGrid grid = galerkin_grid(basis_size);
        KreinMatrices coarse = assemble_krein(grid, basis_size);
        bool converged = false;
        for (int pass = 0; pass < 3; ++pass) {
            grid = refined(grid);
            KreinMatrices fine = assemble_krein(grid, basis_size);
            const double err =
                std::max(rel_change(coarse.e0, fine.e0), rel_change(coarse.e1, fine.e1));
            coarse = std::move(fine);
            if (err < kEntryRelTol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw QuadratureFailure("krein_pair: entry integrals did not stabilize");

        pair.T = SymOp::symmetrized(coarse.e0);
        const SymOp t1 = SymOp::symmetrized(coarse.e1);
        pair.S = t1 - pair.T;
        Vec v = coarse.phi_coeff;
        const double nv = norm2(v);
        for (double& x : v) x /= nv;
        pair.phi.push_back(std::move(v));
        pair.alphas.push_back(nv * nv);
        pair.meta = "laguerre_galerkin";
    } else {
        NystromParams ny = scheme.ny;
        if (!(ny.length > 0.0)) throw BadParams("krein_pair: nystrom length must be positive");
        if (ny.grid == 0) ny.grid = basis_size;
        if (ny.grid < basis_size)
            throw BadParams("krein_pair: nystrom grid must be >= basis_size");
        const PanelGrid grid = nystrom_grid(ny, basis_size);
        pair.T = nystrom_matrix(grid, &kernel_sinh);
        const SymOp t1 = nystrom_matrix(grid, &kernel_cosh);
        pair.S = t1 - pair.T;
        Vec v(grid.size());
        for (std::size_t m = 0; m < grid.size(); ++m)
            v[m] = std::sqrt(grid.weights[m]) * std::exp(-grid.nodes[m]);
        const double nv = norm2(v);
        for (double& x : v) x /= nv;
        pair.phi.push_back(std::move(v));
        pair.alphas.push_back(nv * nv);
        pair.meta = "nystrom";
    }
    pair.rank_S = 1;
    return pair;
}

SymOp carleman(std::size_t basis_size, DiscretizationScheme scheme) {
    if (basis_size < 2) throw BadParams("carleman: basis_size >= 2 required");

    if (scheme.kind == DiscretizationScheme::laguerre_galerkin) {
        PanelGrid grid = galerkin_grid(basis_size);
        std::size_t s_points = basis_size + 80;
        Mat coarse = assemble_carleman(grid, basis_size, s_points);
        for (int pass = 0; pass < 3; ++pass) {
            grid = refined(grid);
            s_points *= 2;
            Mat fine = assemble_carleman(grid, basis_size, s_points);
            const double err = rel_change(coarse, fine);
            coarse = std::move(fine);
            if (err < kEntryRelTol) return SymOp::symmetrized(coarse);
        }
        throw QuadratureFailure("carleman: entry integrals did not stabilize");
    }

    NystromParams ny = scheme.ny;
    if (!(ny.length > 0.0)) throw BadParams("carleman: nystrom length must be positive");
    if (ny.grid == 0) ny.grid = basis_size;
    if (ny.grid < basis_size)
        throw BadParams("carleman: nystrom grid must be >= basis_size");
    const PanelGrid grid = nystrom_grid(ny, basis_size);
    const std::size_t M = grid.size();
    Mat k(M, M);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = i; j < M; ++j) {
            const double v = std::sqrt(grid.weights[i] * grid.weights[j]) /
                             (grid.nodes[i] + grid.nodes[j]);
            k(i, j) = v;
            k(j, i) = v;
        }
    return SymOp::adopt_symmetric(std::move(k));
}

SymOp jacobi_operator(const std::function<double(long)>& a,
                      const std::function<double(long)>& b, std::size_t m) {
    if (m < 1) throw BadParams("jacobi_operator: m >= 1 required");
    const std::size_t n = 2 * m + 1;
    Mat h(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const long site = static_cast<long>(i) - static_cast<long>(m);
        h(i, i) = b(site);
        if (i + 1 < n) {
            const double off = a(site);
            if (!(off > 0.0)) throw BadParams("jacobi_operator: a_n must be positive");
            h(i, i + 1) = off;
            h(i + 1, i) = off;
        }
    }
    return SymOp::symmetrized(h);
}

SymOp almost_mathieu(double kappa, double beta, double theta, std::size_t m) {
    if (kappa == 0.0) throw BadParams("almost_mathieu: kappa must be nonzero");
    const double two_pi = 6.283185307179586476925286766559;
    return jacobi_operator([](long) { return 1.0; },
                           [=](long n) {
                               return 2.0 * kappa *
                                      std::cos(two_pi * (theta + static_cast<double>(n) * beta));
                           },
                           m);
}

SymOp discrete_schrodinger(const std::function<double(long)>& V, std::size_t m) {
    return jacobi_operator([](long) { return 1.0; }, V, m);
}

std::vector<Vec> orthonormalize_or_reject(const std::vector<Vec>& vectors, double tol) {
    if (vectors.empty()) throw BadParams("orthonormalize: no vectors");
    std::vector<Vec> basis;
    basis.reserve(vectors.size());
    for (const Vec& raw : vectors) {
        const double orig = norm2(raw);
        if (orig == 0.0) throw BadParams("orthonormalize: zero vector");
        Vec v = raw;
        for (const Vec& b : basis) axpy(-dot(b, v), b, v);
        for (const Vec& b : basis) axpy(-dot(b, v), b, v);
        const double nv = norm2(v);
        if (nv < tol * orig)
            throw BadParams("orthonormalize: numerically dependent vectors");
        for (double& x : v) x /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

SymOp rank_perturbation(const std::vector<Vec>& vectors, const Vec& alphas) {
    if (vectors.size() != alphas.size())
        throw BadParams("rank_perturbation: one alpha per vector required");
    for (double a : alphas)
        if (a == 0.0) throw BadParams("rank_perturbation: zero alpha");
    const std::vector<Vec> ortho = orthonormalize_or_reject(vectors);
    return outer_sum(ortho, alphas);
}

Vec KrylovBasis::column(std::size_t i) const {
    Vec v(basis.rows());
    for (std::size_t k = 0; k < basis.rows(); ++k) v[k] = basis(k, i);
    return v;
}

KrylovBasis krylov_basis(const SymOp& T, const Vec& phi, double tol) {
    const std::size_t n = T.order();
    if (phi.size() != n) throw BadParams("krylov_basis: dimension mismatch");
    const double nphi = norm2(phi);
    if (nphi == 0.0) throw BadParams("krylov_basis: zero seed vector");

    std::vector<Vec> cols;
    Vec v = phi;
    for (double& x : v) x /= nphi;
    cols.push_back(v);
    while (cols.size() < n) {
        Vec w = T.apply(cols.back());
        for (const Vec& b : cols) axpy(-dot(b, w), b, w);
        for (const Vec& b : cols) axpy(-dot(b, w), b, w);
        const double nw = norm2(w);
        if (nw < tol) break;
        for (double& x : w) x /= nw;
        cols.push_back(std::move(w));
    }

    KrylovBasis out;
    out.dim = cols.size();
    out.cyclic = (out.dim == n);
    out.basis = Mat(n, out.dim);
    for (std::size_t j = 0; j < out.dim; ++j)
        for (std::size_t i = 0; i < n; ++i) out.basis(i, j) = cols[j][i];
    return out;
}

double sinh_kernel_monomial_image(std::size_t k, double x) {
    const double head = std::pow(x, static_cast<double>(k + 1)) / static_cast<double>(k + 1);
    double kfact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) kfact *= static_cast<double>(i);
    double tail = 0.0;
    for (std::size_t l = 0; l + 1 <= k; ++l) {
        double denom_fact = 1.0;  // (k-l)!
        for (std::size_t i = 2; i <= k - l; ++i) denom_fact *= static_cast<double>(i);
        tail += std::pow(2.0 * x, static_cast<double>(k - l)) * kfact / denom_fact;
    }
    return 0.5 * std::exp(-x) *
           (head + std::ldexp(1.0, -static_cast<int>(k + 1)) * tail);
}

namespace {

double composite_gl(double a, double b, std::size_t panels, std::size_t pts,
                    const std::function<double(double)>& f) {
    if (!(b > a)) return 0.0;
    Vec rn, rw, pn, pw;
    gauss_legendre(pts, rn, rw);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
        const double pb = a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(panels);
        map_to_interval(rn, rw, pa, pb, pn, pw);
        for (std::size_t q = 0; q < pn.size(); ++q) total += pw[q] * f(pn[q]);
    }
    return total;
}

double adaptive_gl(double a, double b, const std::function<double(double)>& f) {
    double prev = composite_gl(a, b, 8, 24, f);
    for (std::size_t panels = 16; panels <= 256; panels *= 2) {
        const double cur = composite_gl(a, b, panels, 24, f);
        if (std::abs(cur - prev) <= 1e-10 * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureFailure("adaptive_gl: no convergence on entry integral");
}

}  // namespace

double laguerre_reference_apply(std::size_t k, const Vec& x_grid, double L) {
    if (k > 8) throw BadParams("laguerre_reference_apply: k <= 8 required");
    if (x_grid.empty()) throw BadParams("laguerre_reference_apply: empty grid");
    for (double x : x_grid)
        if (!(x > 0.0 && x < L))
            throw BadParams("laguerre_reference_apply: grid point outside (0, L)");

    const auto psi = [k](double y) {
        return std::pow(y, static_cast<double>(k)) * std::exp(-y);
    };
    double worst = 0.0;
    for (double x : x_grid) {
        const double lower =
            adaptive_gl(0.0, x, [&psi](double y) { return std::sinh(y) * psi(y); });
        const double upper =
            adaptive_gl(x, L, [&psi](double y) { return std::exp(-y) * psi(y); });
        const double quad = std::exp(-x) * lower + std::sinh(x) * upper;
        const double closed = sinh_kernel_monomial_image(k, x);
        worst = std::max(worst, std::abs(quad - closed) / (1.0 + std::abs(closed)));
    }
    return worst;
}

OperatorPair make_operator(const OperatorSpec& spec, std::size_t size) {
    switch (spec.family) {
        case Family::DiagExample1: {
            const auto N = static_cast<std::size_t>(get_param(spec, "N", 1.0));
            return diag_example_one(size, N);
        }
        case Family::DiagExample2:
            return diag_example_two(size);
        case Family::KreinPair:
        case Family::Carleman: {
            DiscretizationScheme scheme = DiscretizationScheme::galerkin();
            if (get_param(spec, "nystrom", 0.0) != 0.0) {
                scheme = DiscretizationScheme::nystrom_on(
                    get_param(spec, "length", kNystromLength),
                    static_cast<std::size_t>(get_param(spec, "grid", 0.0)));
            }
            if (spec.family == Family::KreinPair) return krein_pair(size, scheme);
            OperatorPair pair;
            pair.T = carleman(size, scheme);
            pair.meta = "carleman";
            attach_perturbation(pair, spec);
            return pair;
        }
        case Family::Jacobi: {
            const double ac = get_param(spec, "a_const", 1.0);
            const double bc = get_param(spec, "b_const", 0.0);
            OperatorPair pair;
            pair.T = jacobi_operator([ac](long) { return ac; }, [bc](long) { return bc; },
                                     size);
            pair.meta = "jacobi";
            attach_perturbation(pair, spec);
            return pair;
        }
        case Family::AlmostMathieu: {
            const double kappa = require_param(spec, "kappa");
            const double beta = get_param(spec, "beta", 0.61803398874989484820);
            const double theta = get_param(spec, "theta", 0.0);
            OperatorPair pair;
            pair.T = almost_mathieu(kappa, beta, theta, size);
            pair.meta = "almost_mathieu";
            attach_perturbation(pair, spec);
            return pair;
        }
        case Family::DiscreteSchrodinger: {
            const double vconst = get_param(spec, "v_const", 0.0);
            const double vamp = get_param(spec, "v_amp", 0.0);
            OperatorPair pair;
            if (vamp > 0.0) {
                Rng rng(spec.seed ^ 0xa24baed4963ee407ULL);
                const std::size_t n = 2 * size + 1;
                Vec v(n);
                for (double& x : v) x = rng.uniform(-vamp, vamp);
                pair.T = discrete_schrodinger(
                    [v, size](long s) { return v[static_cast<std::size_t>(s + static_cast<long>(size))]; },
                    size);
            } else {
                pair.T = discrete_schrodinger([vconst](long) { return vconst; }, size);
            }
            pair.meta = "discrete_schrodinger";
            attach_perturbation(pair, spec);
            return pair;
        }
        case Family::RandomSym: {
            Rng rng(spec.seed);
            OperatorPair pair;
            pair.T = random_symmetric(size, rng);
            pair.meta = "random_sym";
            attach_perturbation(pair, spec);
            return pair;
        }
    }
    throw BadParams("make_operator: unknown family");
}

}  // namespace speclab

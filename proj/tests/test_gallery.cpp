#include <doctest.h>

#include <cmath>
#include <numeric>

#include "speclab/eig.hpp"
#include "speclab/gallery.hpp"
#include "speclab/projection.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/rng.hpp"

using namespace speclab;

TEST_CASE("diag_example_one lays out both diagonals") {
    const OperatorPair pair = diag_example_one(6, 2);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(pair.T(i, i) == doctest::Approx(-1.0 / static_cast<double>(i + 1)));
    CHECK(pair.S(0, 0) == doctest::Approx(-1.0));
    CHECK(pair.S(1, 1) == doctest::Approx(-1.0));
    for (std::size_t i = 2; i < 6; ++i) CHECK(pair.S(i, i) == 0.0);
    CHECK(pair.rank_S == 2);
}

TEST_CASE("diag_example_one bounds on N") {
    CHECK_NOTHROW(diag_example_one(5, 4));
    CHECK_THROWS_AS(diag_example_one(5, 5), BadParams);
    CHECK_THROWS_AS(diag_example_one(5, 0), BadParams);
}

TEST_CASE("diag_example_two matches the interleaved diagonals at n=7") {
    const OperatorPair pair = diag_example_two(7);
    const double a0 = -1.0, a1 = -0.5;
    const Vec expect_t = {a0,
                          a0 + 0.5 / 4.0,
                          a1,
                          a1 + (1.0 / 6.0) / 4.0,
                          a0 + 0.5 / 5.0,
                          a1 + (1.0 / 6.0) / 5.0,
                          a0 + 0.5 / 6.0};
    const Vec expect_s = {0.0,
                          -2.0 * 0.5 / 4.0,
                          0.0,
                          -2.0 * (1.0 / 6.0) / 4.0,
                          -2.0 * 0.5 / 5.0,
                          -2.0 * (1.0 / 6.0) / 5.0,
                          -2.0 * 0.5 / 6.0};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(pair.T(i, i) == doctest::Approx(expect_t[i]).epsilon(1e-15));
        CHECK(pair.S(i, i) == doctest::Approx(expect_s[i]).epsilon(1e-15));
    }
    // Entrywise sum: the perturbed second entry sits mirrored below a0.
    CHECK(pair.T(1, 1) + pair.S(1, 1) == doctest::Approx(a0 - 0.5 / 4.0));
    CHECK_THROWS_AS(diag_example_two(6), BadParams);
}

TEST_CASE("diag_example_two: kernel of D-I grows with order at both limit points") {
    for (double lambda : {-1.0, -0.5}) {
        std::size_t last_dim = 0;
        for (std::size_t n : {11, 21, 41}) {
            const OperatorPair pair = diag_example_two(n);
            const auto [d, report] = proj_diff(pair.T, pair.S, lambda,
                                               IntervalKind::open_below,
                                               TiePolicy::resolve, 1e-10);
            CHECK(report.dim_ker_plus_i == 0);
            CHECK(report.dim_ker_minus_i > last_dim);
            last_dim = report.dim_ker_minus_i;
        }
    }
}

TEST_CASE("lattice: free discrete Schrodinger matches the path-graph spectrum") {
    const std::size_t m = 10;
    const SymOp h = discrete_schrodinger([](long) { return 0.0; }, m);
    const std::size_t n = 2 * m + 1;
    REQUIRE(h.order() == n);
    const EigSystem e = eig_sym(h);
    const double pi = 3.14159265358979323846;
    // Closed form for the order-n tridiagonal truncation: 2 cos(k pi/(n+1)).
    Vec expect(n);
    for (std::size_t k = 1; k <= n; ++k)
        expect[n - k] =
            2.0 * std::cos(static_cast<double>(k) * pi / static_cast<double>(n + 1));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - expect[i]) < 1e-10);
}

TEST_CASE("lattice: free spectrum stays inside (-2, 2) and is symmetric") {
    const SymOp h = discrete_schrodinger([](long) { return 0.0; }, 100);
    const EigSystem e = eig_sym(h);
    for (double v : e.values) {
        CHECK(v > -2.0);
        CHECK(v < 2.0);
    }
    const std::size_t n = e.order();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(e.values[i] + e.values[n - 1 - i]) < 1e-10);
}

TEST_CASE("lattice: almost Mathieu norm bound and parameter validation") {
    const double kappa = 0.7;
    const SymOp h = almost_mathieu(kappa, 0.61803398874989, 0.3, 40);
    const EigSystem e = eig_sym(h);
    CHECK(e.spectral_radius() <= 2.0 + 2.0 * std::abs(kappa) + 1e-12);
    CHECK_THROWS_AS(almost_mathieu(0.0, 0.5, 0.0, 5), BadParams);
}

TEST_CASE("lattice: nonpositive hopping is rejected") {
    CHECK_THROWS_AS(
        jacobi_operator([](long) { return 0.0; }, [](long) { return 0.0; }, 3), BadParams);
}

TEST_CASE("rank_perturbation: basics and trace") {
    const Vec e1 = {1.0, 0.0, 0.0, 0.0};
    const SymOp s = rank_perturbation({e1}, {-1.0});
    CHECK(s(0, 0) == doctest::Approx(-1.0));
    CHECK(max_abs(s) == doctest::Approx(1.0));

    Rng rng(41);
    const std::vector<Vec> vs = random_orthonormal(4, 2, rng);
    const SymOp s2 = rank_perturbation(vs, {0.7, -0.3});
    double trace = 0.0;
    for (std::size_t i = 0; i < 4; ++i) trace += s2(i, i);
    CHECK(trace == doctest::Approx(0.4));
}

TEST_CASE("rank_perturbation: eigenvalues are the alphas plus zeros") {
    Rng rng(43);
    const std::size_t n = 9;
    const std::vector<Vec> vs = random_orthonormal(n, 3, rng);
    const Vec alphas = {1.5, -0.25, 0.75};
    const EigSystem e = eig_sym(rank_perturbation(vs, alphas));
    const Vec expect = {-0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.75, 1.5};
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(e.values[i] - expect[i]) < 1e-12);
}

TEST_CASE("rank_perturbation: rejects dependent vectors and zero alphas") {
    const Vec a = {1.0, 0.0}, b = {1.0, 1e-13};
    CHECK_THROWS_AS(rank_perturbation({a, b}, {1.0, 1.0}), BadParams);
    CHECK_THROWS_AS(rank_perturbation({a}, {0.0}), BadParams);
}

TEST_CASE("krylov_basis: distinct eigenvalues with full support are cyclic") {
    const SymOp t = SymOp::diagonal({1.0, 2.0, 3.0});
    const double c = 1.0 / std::sqrt(3.0);
    const KrylovBasis kb = krylov_basis(t, {c, c, c}, 1e-10);
    CHECK(kb.dim == 3);
    CHECK(kb.cyclic);
}

TEST_CASE("krylov_basis: identity has a one-dimensional orbit") {
    Rng rng(7);
    const Vec phi = random_unit_vec(6, rng);
    const KrylovBasis kb = krylov_basis(SymOp::identity(6), phi, 1e-10);
    CHECK(kb.dim == 1);
    CHECK_FALSE(kb.cyclic);
}

TEST_CASE("krylov_basis: repeated eigenvalue truncates the orbit") {
    const SymOp t = SymOp::diagonal({1.0, 1.0, 2.0});
    const double c = 1.0 / std::sqrt(2.0);
    const KrylovBasis kb = krylov_basis(t, {c, 0.0, c}, 1e-10);
    CHECK(kb.dim == 2);

    // Oracle: rank of the raw Krylov column Gram matrix.
    const Vec phi = {c, 0.0, c};
    const Vec tphi = t.apply(phi);
    const Vec t2phi = t.apply(tphi);
    Mat g(3, 3);
    const std::vector<Vec> cols = {phi, tphi, t2phi};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g(i, j) = dot(cols[i], cols[j]);
    CHECK(numerical_rank(SymOp::symmetrized(g), 1e-10) == 2);
}

TEST_CASE("krylov_basis columns are orthonormal") {
    Rng rng(19);
    const SymOp t = random_symmetric(12, rng);
    const Vec phi = random_unit_vec(12, rng);
    const KrylovBasis kb = krylov_basis(t, phi, 1e-10);
    REQUIRE(kb.cyclic);  // generic seed for a generic matrix

    for (std::size_t i = 0; i < kb.dim; ++i)
        for (std::size_t j = i; j < kb.dim; ++j) {
            const double g = dot(kb.column(i), kb.column(j));
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("krylov_basis: the truncated orbit span absorbs T^j phi") {
    const SymOp t = SymOp::diagonal({1.0, 1.0, 2.0, 3.0});
    const double c = 1.0 / std::sqrt(3.0);
    const Vec phi = {c, 0.0, c, c};
    const double tol = 1e-10;
    const KrylovBasis kb = krylov_basis(t, phi, tol);
    CHECK(kb.dim == 3);

    Vec power = phi;
    for (std::size_t j = 0; j <= kb.dim; ++j) {
        Vec residual = power;
        for (std::size_t i = 0; i < kb.dim; ++i)
            axpy(-dot(kb.column(i), residual), kb.column(i), residual);
        CHECK(norm2(residual) < 10.0 * tol * norm2(power));
        power = t.apply(power);
    }
}

TEST_CASE("make_operator: perturb_rank zero yields S = 0") {
    OperatorSpec spec;
    spec.family = Family::RandomSym;
    spec.params["perturb_rank"] = 0.0;
    spec.seed = 21;
    const OperatorPair pair = make_operator(spec, 10);
    CHECK(pair.rank_S == 0);
    CHECK(max_abs(pair.S) == 0.0);
}

TEST_CASE("make_operator: almost_mathieu requires kappa") {
    OperatorSpec spec;
    spec.family = Family::AlmostMathieu;
    CHECK_THROWS_AS(make_operator(spec, 5), BadParams);
}

TEST_CASE("quadrature grids partition the interval") {
    const PanelGrid g = graded_grid(40.0, 30, 16);
    const Quadrature q = g.as_quadrature();
    const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
    CHECK(std::abs(total - 40.0) < 1e-12 * 40.0);
    for (std::size_t i = 1; i < q.nodes.size(); ++i) CHECK(q.nodes[i] > q.nodes[i - 1]);
    CHECK(q.nodes.front() > 0.0);
    CHECK(q.nodes.back() < 40.0);

    Vec n16, w16;
    gauss_legendre(16, n16, w16);
    double integral = 0.0;
    for (std::size_t i = 0; i < 16; ++i) integral += w16[i] * std::pow(n16[i], 10);
    CHECK(integral == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

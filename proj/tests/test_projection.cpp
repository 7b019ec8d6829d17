#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "speclab/gallery.hpp"
#include "speclab/projection.hpp"
#include "speclab/rng.hpp"

using namespace speclab;

namespace {

// Random lambda bounded away from the spectra of both operators.
double off_tie_lambda(const EigSystem& a, const EigSystem& b, Rng& rng, double margin) {
    const double lo = std::min(a.values.front(), b.values.front()) - 0.3;
    const double hi = std::max(a.values.back(), b.values.back()) + 0.3;
    for (;;) {
        const double lambda = rng.uniform(lo, hi);
        bool clear = true;
        for (double v : a.values)
            if (std::abs(v - lambda) <= margin) clear = false;
        for (double v : b.values)
            if (std::abs(v - lambda) <= margin) clear = false;
        if (clear) return lambda;
    }
}

}  // namespace

TEST_CASE("proj_diff: zero perturbation gives the zero difference") {
    Rng rng(31);
    const SymOp t = random_symmetric(9, rng);
    const auto [d, report] = proj_diff(t, SymOp::zero(9), 0.37);
    CHECK(max_abs(d) < 1e-14);
    CHECK(report.dim_ker == 9);
    CHECK(report.trace_norm < 1e-12);
}

TEST_CASE("proj_diff: rank-two diagonal pair saturates the dimensions") {
    const OperatorPair pair = diag_example_one(6, 2);
    const auto [d, report] = proj_diff(pair.T, pair.S, -1.2);
    CHECK(report.dim_ker_minus_i == 2);
    CHECK(report.dim_ker_plus_i == 0);
    CHECK(report.trace_norm == doctest::Approx(2.0));
}

TEST_CASE("proj_diff: hand-computed 2x2 case") {
    const SymOp t = SymOp::diagonal({0.0, 1.0});
    const SymOp s = rank_perturbation({{1.0, 0.0}}, {1.0});
    const auto [d, report] = proj_diff(t, s, 0.5);
    CHECK(d(0, 0) == doctest::Approx(-1.0));
    CHECK(std::abs(d(1, 1)) < 1e-14);
    CHECK(report.dim_ker_plus_i == 1);
    CHECK(report.dim_ker_minus_i == 0);
    CHECK(report.dim_ker == 1);
}

TEST_CASE("proj_diff: lambda below both spectra vanishes") {
    Rng rng(37);
    const SymOp t = random_symmetric(12, rng);
    const std::vector<Vec> vs = random_orthonormal(12, 2, rng);
    const SymOp s = rank_perturbation(vs, {0.9, -0.4});
    const auto [d, report] = proj_diff(t, s, -50.0);
    CHECK(max_abs(d) < 1e-14);
    CHECK(report.dim_ker == 12);
}

TEST_CASE("proj_diff: constant between consecutive eigenvalues") {
    Rng rng(41);
    const SymOp t = random_symmetric(14, rng);
    const std::vector<Vec> vs = random_orthonormal(14, 1, rng);
    const SymOp s = rank_perturbation(vs, {0.8});
    const EigSystem et = eig_sym(t), ets = eig_sym(t + s);

    Vec all = et.values;
    all.insert(all.end(), ets.values.begin(), ets.values.end());
    std::sort(all.begin(), all.end());
    std::size_t gi = 0;
    for (std::size_t i = 1; i + 1 < all.size(); ++i)
        if (all[i + 1] - all[i] > all[gi + 1] - all[gi]) gi = i;
    const double l1 = all[gi] + 0.25 * (all[gi + 1] - all[gi]);
    const double l2 = all[gi] + 0.75 * (all[gi + 1] - all[gi]);
    const auto [d1, r1] = proj_diff(t, s, l1);
    const auto [d2, r2] = proj_diff(t, s, l2);
    CHECK(max_abs(d1 - d2) < 1e-10);
}

TEST_CASE("proj_diff: dimensions saturate across the whole interval below -1") {
    for (const std::size_t N : {1, 2, 3}) {
        const OperatorPair pair = diag_example_one(12, N);
        const double lo = -1.0 - 1.0 / static_cast<double>(N);
        for (double t : {0.15, 0.4, 0.6, 0.85}) {
            const double lambda = lo + t * (-1.0 - lo);
            bool tie = false;  // interior grid points can hit perturbed eigenvalues
            for (std::size_t k = 1; k <= N; ++k)
                if (std::abs(lambda - (-1.0 - 1.0 / static_cast<double>(k))) < 1e-9)
                    tie = true;
            if (tie) continue;
            const auto [d, report] = proj_diff(pair.T, pair.S, lambda);
            CHECK(report.dim_ker_minus_i == N);
            CHECK(report.dim_ker_plus_i == 0);
        }
    }
}

TEST_CASE("proj_diff: closed half-lines include the boundary eigenvalue") {
    const OperatorPair pair = diag_example_one(6, 2);
    // -1.5 is an eigenvalue of the perturbed operator only
    const auto [dc, rc] = proj_diff(pair.T, pair.S, -1.5, IntervalKind::closed_below,
                                    TiePolicy::resolve);
    CHECK(rc.dim_ker_minus_i == 2);
    const auto [doo, ro] = proj_diff(pair.T, pair.S, -1.5, IntervalKind::open_below,
                                     TiePolicy::resolve);
    CHECK(ro.dim_ker_minus_i == 1);
}

TEST_CASE("proj_diff propagates ties") {
    const OperatorPair pair = diag_example_one(6, 2);
    CHECK_THROWS_AS(proj_diff(pair.T, pair.S, -0.5), TieAtThreshold);
}

TEST_CASE("halmos_split: zero and hand-made spectra") {
    const HalmosSplit h0 = halmos_split(SymOp::zero(5), 1e-9);
    CHECK(h0.dim_ker == 5);
    CHECK(h0.dim_plus_one == 0);
    CHECK(h0.dim_minus_one == 0);
    CHECK(h0.generic_spectrum.empty());
    CHECK(h0.pair_defect == 0.0);

    const HalmosSplit h1 = halmos_split(SymOp::diagonal({1.0, -1.0, 0.0}), 1e-9);
    CHECK(h1.dim_ker == 1);
    CHECK(h1.dim_plus_one == 1);
    CHECK(h1.dim_minus_one == 1);
    CHECK(h1.generic_spectrum.empty());

    CHECK_THROWS_AS(halmos_split(SymOp::diagonal({1.5}), 1e-9), NotAProjectionDifference);
}

TEST_CASE("halmos_split: generic part of a projection difference is symmetric") {
    Rng rng(47);
    const SymOp t = random_symmetric(24, rng);
    const std::vector<Vec> vs = random_orthonormal(24, 2, rng);
    const SymOp s = rank_perturbation(vs, {1.1, -0.6});
    const EigSystem et = eig_sym(t), ets = eig_sym(t + s);
    const double lambda = off_tie_lambda(et, ets, rng, 1e-6);
    const auto [d, report] = proj_diff(t, s, lambda);
    const HalmosSplit h = halmos_split_of_spectrum(report.spectrum, 1e-8);
    CHECK(h.pair_defect <= 1e-8);
    CHECK(report.spectrum.front() >= -1.0 - 1e-9);
    CHECK(report.spectrum.back() <= 1.0 + 1e-9);
}

TEST_CASE("halmos_split: Krein difference at the spectral midpoint") {
    const OperatorPair pair = krein_pair(200);
    const auto [d, report] = proj_diff(pair.T, pair.S, 0.5);
    const HalmosSplit h = halmos_split_of_spectrum(report.spectrum, 1e-8);
    CHECK(h.pair_defect < 1e-8);
    CHECK(report.min_eig >= -1.0 - 1e-9);
    CHECK(report.max_eig <= 1.0 + 1e-9);
}

TEST_CASE("check_conditions: the rank-two pair needs N = 2") {
    const OperatorPair pair = diag_example_one(6, 2);
    const auto [d, report] = proj_diff(pair.T, pair.S, -1.2);
    CHECK(check_conditions(report, 2).c3);
    CHECK_FALSE(check_conditions(report, 1).c3);
}

TEST_CASE("check_conditions: zero difference satisfies every budget") {
    Rng rng(53);
    const SymOp t = random_symmetric(7, rng);
    const auto [d, report] = proj_diff(t, SymOp::zero(7), 0.1);
    for (int n = 0; n <= 4; ++n) CHECK(check_conditions(report, n).c3);
}

TEST_CASE("check_conditions: rank-one perturbations always balance within one") {
    Rng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const SymOp t = random_symmetric(40, rng);
        const std::vector<Vec> vs = random_orthonormal(40, 1, rng);
        const SymOp s = rank_perturbation(
            vs, {rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0)});
        const EigSystem et = eig_sym(t), ets = eig_sym(t + s);
        const double lambda = off_tie_lambda(et, ets, rng, 1e-6);
        const auto [d, report] = proj_diff(t, s, lambda);
        CHECK(check_conditions(report, 1).c3);
        CHECK(report.dim_ker_minus_i <= 1);
        CHECK(report.dim_ker_plus_i <= 1);
    }
}

TEST_CASE("gap_eig_count: hand case and empty perturbation") {
    const SymOp a = SymOp::diagonal({0.0, 0.0, 1.0, 1.0});
    const SymOp b = rank_perturbation({{1.0, 0.0, 0.0, 0.0}}, {0.5});
    CHECK(gap_eig_count(a, b, 0.2, 0.8) == 1);
    CHECK(gap_eig_count(a, SymOp::zero(4), 0.2, 0.8) == 0);
    CHECK_THROWS_AS(gap_eig_count(a, b, -0.5, 0.5), GapNotEmpty);
}

TEST_CASE("gap_eig_count: no more eigenvalues in a gap than the rank") {
    Rng rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 16 + static_cast<std::size_t>(rng.uniform(0.0, 16.0));
        Vec d(n);
        for (double& v : d)
            v = (rng.uniform() < 0.5) ? rng.uniform(-2.0, -0.4) : rng.uniform(0.4, 2.0);
        const std::vector<Vec> basis = random_orthonormal(n, n, rng);
        const SymOp a = outer_sum(basis, d);

        const std::size_t rank = 1 + static_cast<std::size_t>(rng.uniform(0.0, 3.0));
        const std::vector<Vec> vs = random_orthonormal(n, rank, rng);
        Vec alphas(rank);
        for (double& al : alphas)
            al = rng.uniform(0.2, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const SymOp b = rank_perturbation(vs, alphas);

        CHECK(gap_eig_count(a, b, -0.35, 0.35) <= rank);
    }
}

TEST_CASE("classify_lambda on the harmonic diagonal family") {
    std::vector<Vec> spectra;
    for (std::size_t n : {20, 40, 80}) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = -1.0 / static_cast<double>(i + 1);
        std::sort(v.begin(), v.end());
        spectra.push_back(std::move(v));
    }

    CHECK(classify_lambda(spectra, 0.0, 0.1).verdict == PointVerdict::M_minus);
    CHECK(classify_lambda(spectra, -1.0, 0.1).verdict == PointVerdict::DiscreteEigenvalue);
    CHECK(classify_lambda(spectra, 5.0, 0.1).verdict == PointVerdict::Resolvent);
    CHECK_THROWS_AS(classify_lambda({spectra[0]}, 0.0, 0.1), BadParams);
}

TEST_CASE("classify_lambda: two-sided accumulation and instability") {
    const Vec sym1 = {-0.05, -0.03, -0.01, 0.01, 0.03, 0.05};
    const Vec sym2 = {-0.06, -0.04, -0.02, -0.008, 0.008, 0.02, 0.04, 0.06};
    CHECK(classify_lambda({sym1, sym2}, 0.0, 0.1).verdict == PointVerdict::M_twosided);

    const Vec left = {-0.05, -0.03, -0.01};
    const Vec right = {0.01, 0.03, 0.05};
    const PointClass pc = classify_lambda({left, right}, 0.0, 0.1);
    CHECK(pc.verdict == PointVerdict::Unstable);
    CHECK(pc.evidence.size() == 2);
}

TEST_CASE("weyl_probe: zero perturbation gives zero norms") {
    Rng rng(67);
    const SymOp t = random_symmetric(30, rng);
    const Vec norms = weyl_probe(t, SymOp::zero(30), {}, 0.2, 5, 99);
    REQUIRE(norms.size() == 5);
    for (double v : norms) CHECK(v < 1e-12);
}

TEST_CASE("weyl_probe: exhausts when constraints fill the space") {
    const SymOp t = SymOp::diagonal({1.0, 2.0, 3.0});
    const std::vector<Vec> phis = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    const SymOp s = rank_perturbation(phis, {0.5, 0.5});
    CHECK_THROWS_AS(weyl_probe(t, s, phis, 1.7, 3, 1), ProbeExhausted);
}

TEST_CASE("weyl_probe: norms stay far below the operator scale") {
    const SymOp t = discrete_schrodinger([](long) { return 0.0; }, 150);
    Rng rng(71);
    const std::vector<Vec> phis = random_orthonormal(t.order(), 1, rng);
    const SymOp s = rank_perturbation(phis, {1.0});
    const Vec norms = weyl_probe(t, s, phis, 0.3, 8, 7);
    REQUIRE(norms.size() == 8);
    for (double v : norms) CHECK(v < 0.2);
}

TEST_CASE("krylov_kernel_check: annihilation on the orbit complement") {
    SUBCASE("repeated eigenvalue, seed on the first copy") {
        const SymOp t = SymOp::diagonal({1.0, 1.0, 2.0});
        const double worst = krylov_kernel_check(t, {1.0, 0.0, 0.0}, 1.0, {0.5, 1.5, 2.5});
        CHECK(worst < 1e-10);
    }
    SUBCASE("identity base operator") {
        const SymOp t = SymOp::identity(6);
        Vec phi(6, 0.0);
        phi[0] = 1.0;
        const double worst = krylov_kernel_check(t, phi, 1.0, {0.5, 1.5});
        CHECK(worst < 1e-10);
    }
    SUBCASE("block-diagonal base with the seed in the first block") {
        Rng rng(73);
        const SymOp top = random_symmetric(6, rng);
        const SymOp bottom = random_symmetric(4, rng);
        Mat block(10, 10, 0.0);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) block(i, j) = top(i, j);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) block(6 + i, 6 + j) = bottom(i, j);
        const SymOp t = SymOp::symmetrized(block);
        Vec phi(10, 0.0);
        for (std::size_t i = 0; i < 6; ++i) phi[i] = rng.normal();
        const double nphi = norm2(phi);
        for (double& x : phi) x /= nphi;
        const double worst = krylov_kernel_check(t, phi, 0.8, {-0.5, 0.1, 0.9});
        CHECK(worst < 1e-10);
    }
    SUBCASE("cyclic seed raises NothingToCheck") {
        const SymOp t = SymOp::diagonal({1.0, 2.0, 3.0});
        const double c = 1.0 / std::sqrt(3.0);
        CHECK_THROWS_AS(krylov_kernel_check(t, {c, c, c}, 1.0, {0.5}), NothingToCheck);
    }
}

TEST_CASE("build_correction: balanced input needs no correction") {
    const SymOp d = SymOp::diagonal({1.0, -1.0});
    const SymOp k = build_correction(d, {0.2, 0.1}, 1e-9);
    CHECK(max_abs(k) == 0.0);
}

TEST_CASE("build_correction: zero difference needs no correction") {
    const SymOp k = build_correction(SymOp::zero(4), {0.2, 0.1}, 1e-9);
    CHECK(max_abs(k) == 0.0);
}

TEST_CASE("build_correction: one surplus +1 moves inward within the first shift") {
    const SymOp d = SymOp::diagonal({1.0, 1.0, -1.0});
    const SymOp k = build_correction(d, {0.2, 0.1, 0.05}, 1e-9);
    const EigSystem ek = eig_sym(k);
    std::size_t nonzero = 0;
    double eps = 0.0;
    for (double v : ek.values)
        if (std::abs(v) > 1e-12) {
            ++nonzero;
            eps = v;
        }
    CHECK(nonzero == 1);
    CHECK(eps > 0.0);
    CHECK(eps <= 0.2);

    const EigSystem corrected = eig_sym(d - k);
    std::size_t at_plus = 0, at_minus = 0;
    for (double v : corrected.values) {
        if (std::abs(v - 1.0) <= 1e-9) ++at_plus;
        if (std::abs(v + 1.0) <= 1e-9) ++at_minus;
    }
    CHECK(at_plus == 1);
    CHECK(at_minus == 1);
}

TEST_CASE("build_correction: surplus beyond the budget is infeasible") {
    const SymOp d = SymOp::diagonal({1.0, 1.0, 1.0, -1.0});
    CHECK_THROWS_AS(build_correction(d, {0.2}, 1e-9), CorrectionInfeasible);
}

TEST_CASE("build_correction: rejects a non-decreasing or oversized budget") {
    const SymOp d = SymOp::diagonal({1.0, -1.0});
    CHECK_THROWS_AS(build_correction(d, {0.3, 0.1}, 1e-9), BadParams);
    CHECK_THROWS_AS(build_correction(d, {0.2, 0.2}, 1e-9), BadParams);
    CHECK_THROWS_AS(build_correction(d, {0.2, -0.1}, 1e-9), BadParams);
}

TEST_CASE("rank bound: dimensions of the +-1 eigenspaces never exceed rank S") {
    Rng rng(79);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 20 + static_cast<std::size_t>(rng.uniform(0.0, 21.0));
        const std::size_t rank = 1 + static_cast<std::size_t>(rng.uniform(0.0, 3.0));
        const SymOp t = random_symmetric(n, rng);
        const std::vector<Vec> vs = random_orthonormal(n, rank, rng);
        Vec alphas(rank);
        for (double& al : alphas)
            al = rng.uniform(0.3, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const SymOp s = rank_perturbation(vs, alphas);
        const EigSystem et = eig_sym(t), ets = eig_sym(t + s);
        const double lambda = off_tie_lambda(et, ets, rng, 1e-6);
        const auto [d, report] = proj_diff(t, s, lambda);
        CHECK(report.dim_ker_minus_i <= rank);
        CHECK(report.dim_ker_plus_i <= rank);
    }
}

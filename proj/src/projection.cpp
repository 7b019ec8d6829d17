#include "speclab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "speclab/gallery.hpp"
#include "speclab/rng.hpp"

namespace speclab {

ProjDiffReport report_from_spectrum(Vec spectrum, double lambda, std::size_t order,
                                    IntervalKind kind, double tau) {
    ProjDiffReport r;
    r.lambda = lambda;
    r.order = order;
    r.interval_kind = kind;
    r.tau = tau;
    r.min_eig = spectrum.front();
    r.max_eig = spectrum.back();
    r.min_abs_eig = std::numeric_limits<double>::infinity();
    for (double v : spectrum) {
        r.min_abs_eig = std::min(r.min_abs_eig, std::abs(v));
        r.trace_norm += std::abs(v);
        if (std::abs(v) <= tau) ++r.dim_ker;
        if (std::abs(v - 1.0) <= tau) ++r.dim_ker_minus_i;
        if (std::abs(v + 1.0) <= tau) ++r.dim_ker_plus_i;
    }
    const auto gap = static_cast<int>(
        r.dim_ker_minus_i > r.dim_ker_plus_i ? r.dim_ker_minus_i - r.dim_ker_plus_i
                                             : r.dim_ker_plus_i - r.dim_ker_minus_i);
    for (int n = 0; n <= 8; ++n) r.c3_satisfied_for_n[n] = (gap <= n);
    r.spectrum = std::move(spectrum);
    return r;
}

std::pair<SymOp, ProjDiffReport> proj_diff(const SymOp& T, const SymOp& S, double lambda,
                                           IntervalKind kind, TiePolicy policy, double tau) {
    if (T.order() != S.order()) throw BadParams("proj_diff: order mismatch");

    const EigSystem eig_t = eig_sym(T);
    const EigSystem eig_ts = eig_sym(T + S);
    const Projector p = spectral_projector(eig_ts, lambda, kind, policy);
    const Projector q = spectral_projector(eig_t, lambda, kind, policy);
    SymOp d = p.matrix - q.matrix;

    ProjDiffReport r =
        report_from_spectrum(eig_sym(d).values, lambda, T.order(), kind, tau);
    return {std::move(d), std::move(r)};
}

HalmosSplit halmos_split_of_spectrum(const Vec& spectrum, double tau) {
    HalmosSplit h;
    for (double v : spectrum) {
        if (std::abs(v) > 1.0 + tau)
            throw NotAProjectionDifference("eigenvalue " + std::to_string(v) +
                                           " outside [-1-tau, 1+tau]");
        if (std::abs(v) <= tau)
            ++h.dim_ker;
        else if (std::abs(v - 1.0) <= tau)
            ++h.dim_plus_one;
        else if (std::abs(v + 1.0) <= tau)
            ++h.dim_minus_one;
        else
            h.generic_spectrum.push_back(v);
    }
    Vec neg(h.generic_spectrum.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -h.generic_spectrum[i];
    Vec sorted = h.generic_spectrum;
    std::sort(sorted.begin(), sorted.end());
    std::sort(neg.begin(), neg.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        h.pair_defect = std::max(h.pair_defect, std::abs(sorted[i] - neg[i]));
    return h;
}

HalmosSplit halmos_split(const SymOp& D, double tau) {
    return halmos_split_of_spectrum(eig_sym(D).values, tau);
}

ConditionVerdict check_conditions(const ProjDiffReport& report, int N) {
    ConditionVerdict v;
    const auto gap = static_cast<long>(report.dim_ker_minus_i) -
                     static_cast<long>(report.dim_ker_plus_i);
    v.c3 = std::llabs(gap) <= N;
    v.c2_proxy = report.min_abs_eig;
    v.c1_dim_ker = report.dim_ker;
    v.c1_order = report.order;
    return v;
}

std::size_t gap_eig_count(const SymOp& A, const SymOp& B, double l, double r) {
    if (!(l < r)) throw BadParams("gap_eig_count: empty interval");
    const EigSystem ea = eig_sym(A);
    for (double v : ea.values)
        if (v > l && v < r)
            throw GapNotEmpty("eigenvalue " + std::to_string(v) +
                              " of the base operator inside the gap");
    const EigSystem eab = eig_sym(A + B);
    std::size_t count = 0;
    for (double v : eab.values)
        if (v > l && v < r) ++count;
    return count;
}

std::string point_verdict_name(PointVerdict v) {
    switch (v) {
        case PointVerdict::Resolvent: return "resolvent";
        case PointVerdict::DiscreteEigenvalue: return "discrete_eigenvalue";
        case PointVerdict::M_minus: return "left_accumulation";
        case PointVerdict::M_plus: return "right_accumulation";
        case PointVerdict::M_twosided: return "twosided_accumulation";
        case PointVerdict::Unstable: return "unstable";
    }
    return "unstable";
}

namespace {

PointVerdict verdict_for(const PointEvidence& e) {
    const std::size_t total = e.left_count + e.right_count + e.at_count;
    if (total == 0) return PointVerdict::Resolvent;
    if (e.left_count >= 2 && e.right_count >= 2) return PointVerdict::M_twosided;
    if (e.left_count >= 2) return PointVerdict::M_minus;
    if (e.right_count >= 2) return PointVerdict::M_plus;
    return PointVerdict::DiscreteEigenvalue;
}

}  // namespace

PointClass classify_lambda(const std::vector<Vec>& spectra, double lambda, double gap_tol) {
    if (spectra.size() < 2) throw BadParams("classify_lambda: need >= 2 truncation sizes");
    if (!(gap_tol > 0.0)) throw BadParams("classify_lambda: gap_tol must be positive");
    const double at_tol = 1e-3 * gap_tol;

    PointClass out;
    for (const Vec& spectrum : spectra) {
        PointEvidence ev;
        ev.order = spectrum.size();
        ev.left_gap = std::numeric_limits<double>::infinity();
        ev.right_gap = std::numeric_limits<double>::infinity();
        for (double v : spectrum) {
            const double d = v - lambda;
            if (std::abs(d) <= at_tol) {
                ++ev.at_count;
            } else if (d < 0.0 && -d <= gap_tol) {
                ++ev.left_count;
                ev.left_gap = std::min(ev.left_gap, -d);
            } else if (d > 0.0 && d <= gap_tol) {
                ++ev.right_count;
                ev.right_gap = std::min(ev.right_gap, d);
            }
        }
        out.evidence.push_back(ev);
    }

    const PointEvidence& a = out.evidence[out.evidence.size() - 2];
    const PointEvidence& b = out.evidence.back();
    const PointVerdict va = verdict_for(a), vb = verdict_for(b);
    if (va != vb) {
        out.verdict = PointVerdict::Unstable;
        return out;
    }
    // Accumulation claims additionally need counts that do not shrink with order.
    if (vb == PointVerdict::M_minus && b.left_count < a.left_count) {
        out.verdict = PointVerdict::Unstable;
    } else if (vb == PointVerdict::M_plus && b.right_count < a.right_count) {
        out.verdict = PointVerdict::Unstable;
    } else if (vb == PointVerdict::M_twosided &&
               (b.left_count < a.left_count || b.right_count < a.right_count)) {
        out.verdict = PointVerdict::Unstable;
    } else {
        out.verdict = vb;
    }
    return out;
}

Vec weyl_probe(const SymOp& T, const SymOp& S, const std::vector<Vec>& phis, double lambda,
               std::size_t probe_count, std::uint64_t seed, IntervalKind kind) {
    const std::size_t n = T.order();
    if (S.order() != n) throw BadParams("weyl_probe: order mismatch");
    for (const Vec& p : phis)
        if (p.size() != n) throw BadParams("weyl_probe: phi dimension mismatch");

    const auto [d_op, report] = proj_diff(T, S, lambda, kind);
    Rng rng(seed);

    std::vector<Vec> constraints;  // orthonormal
    std::vector<Vec> powers;       // T^j phi_k, raw, refreshed each round
    for (const Vec& p : phis) powers.push_back(p);

    const auto add_constraint = [&constraints](Vec v) {
        for (const Vec& b : constraints) axpy(-dot(b, v), b, v);
        for (const Vec& b : constraints) axpy(-dot(b, v), b, v);
        const double nv = norm2(v);
        if (nv < 1e-12) return;  // already inside the span
        for (double& x : v) x /= nv;
        constraints.push_back(std::move(v));
    };

    Vec norms;
    norms.reserve(probe_count);
    for (std::size_t step = 1; step <= probe_count; ++step) {
        if (step == 1) {
            for (const Vec& p : powers) add_constraint(p);
        } else {
            for (Vec& p : powers) {
                p = T.apply(p);
                add_constraint(p);
            }
        }
        if (constraints.size() >= n)
            throw ProbeExhausted("admissible subspace exhausted at probe " +
                                 std::to_string(step));

        Vec x;
        bool found = false;
        for (int attempt = 0; attempt < 6 && !found; ++attempt) {
            x = rng.normal_vec(n);
            for (const Vec& b : constraints) axpy(-dot(b, x), b, x);
            for (const Vec& b : constraints) axpy(-dot(b, x), b, x);
            const double nx = norm2(x);
            if (nx > 1e-10) {
                for (double& v : x) v /= nx;
                found = true;
            }
        }
        if (!found)
            throw ProbeExhausted("could not draw a probe inside the admissible subspace");

        norms.push_back(norm2(d_op.apply(x)));
        add_constraint(std::move(x));
    }
    return norms;
}

double krylov_kernel_check(const SymOp& T, const Vec& phi, double alpha,
                           const Vec& lambda_grid, double krylov_tol) {
    const std::size_t n = T.order();
    if (phi.size() != n) throw BadParams("krylov_kernel_check: dimension mismatch");
    if (lambda_grid.empty()) throw BadParams("krylov_kernel_check: empty lambda grid");
    if (alpha == 0.0) throw BadParams("krylov_kernel_check: zero alpha");
    if (krylov_tol < 0.0) krylov_tol = 1e-10 * (1.0 + max_abs(T));

    const KrylovBasis kb = krylov_basis(T, phi, krylov_tol);
    if (kb.cyclic) throw NothingToCheck("seed vector is cyclic; complement is trivial");

    // Extend the Krylov columns to a full orthonormal basis; the tail spans
    // the complement.
    std::vector<Vec> span;
    span.reserve(n);
    for (std::size_t j = 0; j < kb.dim; ++j) span.push_back(kb.column(j));
    std::vector<Vec> complement;
    for (std::size_t i = 0; i < n && span.size() < n; ++i) {
        Vec v(n, 0.0);
        v[i] = 1.0;
        for (const Vec& b : span) axpy(-dot(b, v), b, v);
        for (const Vec& b : span) axpy(-dot(b, v), b, v);
        const double nv = norm2(v);
        if (nv < 1e-8) continue;
        for (double& x : v) x /= nv;
        span.push_back(v);
        complement.push_back(std::move(v));
    }

    Vec unit = phi;
    const double nphi = norm2(unit);
    for (double& x : unit) x /= nphi;
    const SymOp S = outer_sum({unit}, {alpha});

    double worst = 0.0;
    for (double lambda : lambda_grid) {
        const auto [d_op, report] = proj_diff(T, S, lambda);
        for (const Vec& w : complement)
            worst = std::max(worst, norm2(d_op.apply(w)));
    }
    return worst;
}

SymOp build_correction(const SymOp& D, const Vec& a_seq, double tau) {
    if (tau < 0.0) throw BadParams("build_correction: negative tau");
    for (std::size_t i = 0; i < a_seq.size(); ++i) {
        if (!(a_seq[i] > 0.0)) throw BadParams("build_correction: shifts must be positive");
        if (i == 0 && !(a_seq[i] < 0.25))
            throw BadParams("build_correction: first shift must be below 1/4");
        if (i > 0 && !(a_seq[i] < a_seq[i - 1]))
            throw BadParams("build_correction: shifts must be strictly decreasing");
    }

    const EigSystem e = eig_sym(D);
    for (double v : e.values)
        if (std::abs(v) > 1.0 + tau)
            throw NotAProjectionDifference("|eigenvalue| exceeds 1 + tau");

    std::vector<std::size_t> plus, minus;
    for (std::size_t i = 0; i < e.order(); ++i) {
        const double v = e.values[i];
        if (std::abs(v) <= tau) continue;
        if (std::abs(v - 1.0) <= tau) plus.push_back(i);
        if (std::abs(v + 1.0) <= tau) minus.push_back(i);
    }

    const bool plus_majority = plus.size() >= minus.size();
    const std::size_t paired = std::min(plus.size(), minus.size());
    const std::size_t surplus = std::max(plus.size(), minus.size()) - paired;
    if (surplus > a_seq.size()) throw CorrectionInfeasible(surplus);

    Vec k(e.order(), 0.0);
    // Paired +-1 eigenvalues snap exactly onto +-1.
    for (std::size_t i : plus) k[i] = e.values[i] - 1.0;
    for (std::size_t i : minus) k[i] = e.values[i] + 1.0;
    // Surplus of the majority sign moves inward by distinct amounts a_j / 2.
    const std::vector<std::size_t>& majority = plus_majority ? plus : minus;
    for (std::size_t j = 0; j < surplus; ++j) {
        const std::size_t idx = majority[paired + j];
        const double eps = 0.5 * a_seq[j];
        const double target = plus_majority ? 1.0 - eps : -1.0 + eps;
        k[idx] = e.values[idx] - target;
    }

    return assemble_in_basis(e, k);
}

}  // namespace speclab

#pragma once

#include <cstdint>
#include <map>

#include "speclab/eig.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// Everything measured about one difference of half-line spectral projections
/// at a given (lambda, order).
struct ProjDiffReport {
    double lambda = 0.0;
    std::size_t order = 0;
    IntervalKind interval_kind = IntervalKind::open_below;
    double tau = 0.0;

    std::size_t dim_ker = 0;          // #{|eig| <= tau}
    std::size_t dim_ker_minus_i = 0;  // #{|eig - 1| <= tau}
    std::size_t dim_ker_plus_i = 0;   // #{|eig + 1| <= tau}
    double min_abs_eig = 0.0;
    double max_eig = 0.0;
    double min_eig = 0.0;
    double trace_norm = 0.0;  // sum |eig|

    std::map<int, bool> c3_satisfied_for_n;  // |dim(-I) - dim(+I)| <= n
    Vec spectrum;                            // eigenvalues of the difference, ascending
};

/// D = E_(lambda)(T+S) - E_(lambda)(T), both projectors built under the same
/// interval kind. Ties propagate TieAtThreshold from either projector.
std::pair<SymOp, ProjDiffReport> proj_diff(const SymOp& T, const SymOp& S, double lambda,
                                           IntervalKind kind = IntervalKind::open_below,
                                           TiePolicy policy = TiePolicy::reject,
                                           double tau = 1e-9);

/// Report fields computed from an already-known ascending spectrum of the
/// difference. proj_diff and the experiment runner share this.
ProjDiffReport report_from_spectrum(Vec spectrum, double lambda, std::size_t order,
                                    IntervalKind kind, double tau);

/// Decomposition of a projection difference's spectrum into kernel, +1 and -1
/// eigenspaces, and a generic part that must be symmetric about zero.
struct HalmosSplit {
    std::size_t dim_ker = 0;
    std::size_t dim_plus_one = 0;
    std::size_t dim_minus_one = 0;
    Vec generic_spectrum;      // inside (-1,1) minus a tau-neighborhood of {-1,0,1}
    double pair_defect = 0.0;  // max elementwise gap between sorted generic part
                               // and its sorted negation
};

/// Requires all eigenvalues within [-1-tau, 1+tau]; otherwise raises
/// NotAProjectionDifference.
HalmosSplit halmos_split(const SymOp& D, double tau);
HalmosSplit halmos_split_of_spectrum(const Vec& spectrum, double tau);

struct ConditionVerdict {
    bool c3 = false;        // |dim(-I) - dim(+I)| <= N
    double c2_proxy = 0.0;  // min |eig|; near zero means non-invertible in the limit
    std::size_t c1_dim_ker = 0;
    std::size_t c1_order = 0;  // raw pair (dim_ker, order); interpreted by sweeps
};

ConditionVerdict check_conditions(const ProjDiffReport& report, int N);

/// Number of eigenvalues of A+B inside (l, r). Requires (l, r) free of
/// eigenvalues of A (else GapNotEmpty). The caller's guarantee under test is
/// count <= rank(B).
std::size_t gap_eig_count(const SymOp& A, const SymOp& B, double l, double r);

enum class PointVerdict {
    Resolvent,
    DiscreteEigenvalue,
    M_minus,
    M_plus,
    M_twosided,
    Unstable,
};

std::string point_verdict_name(PointVerdict v);

struct PointEvidence {
    std::size_t order = 0;
    std::size_t left_count = 0;   // eigenvalues in [lambda - gap_tol, lambda)
    std::size_t right_count = 0;  // eigenvalues in (lambda, lambda + gap_tol]
    std::size_t at_count = 0;     // eigenvalues within the at-tolerance of lambda
    double left_gap = 0.0;        // distance to the nearest eigenvalue below
    double right_gap = 0.0;
};

struct PointClass {
    PointVerdict verdict = PointVerdict::Unstable;
    std::vector<PointEvidence> evidence;
};

/// Classifies how approximate spectra accumulate at lambda across increasing
/// truncation orders. Requires at least two spectra.
PointClass classify_lambda(const std::vector<Vec>& spectra, double lambda, double gap_tol);

/// Orthonormal probes x_1, x_2, ... with x_n orthogonal to all previous
/// probes and to T^j phi_k for j <= n-1; returns |D(lambda) x_n| per probe.
/// Probes are drawn at random (seeded) inside the admissible subspace.
Vec weyl_probe(const SymOp& T, const SymOp& S, const std::vector<Vec>& phis, double lambda,
               std::size_t probe_count, std::uint64_t seed,
               IntervalKind kind = IntervalKind::open_below);

/// Max over an orthonormal basis of the orthogonal complement of the Krylov
/// span of (T, phi) and over lambda_grid of |D(lambda) w| with S = alpha
/// phi phi^T. Raises NothingToCheck when phi is cyclic.
double krylov_kernel_check(const SymOp& T, const Vec& phi, double alpha,
                           const Vec& lambda_grid, double krylov_tol = -1.0);

/// Correction operator K, diagonal in D's eigenbasis, such that D - K has
/// spectrum in [-1, 1], its t and -t eigenspace dimensions differ by at most
/// one for every t in (0, 1], the kernel is unchanged, and the eigenvalues of
/// K obey |nu_j| <= a_seq[j-1] when sorted by decreasing modulus.
SymOp build_correction(const SymOp& D, const Vec& a_seq, double tau);

}  // namespace speclab

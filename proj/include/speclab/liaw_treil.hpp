#pragma once

#include "speclab/eig.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// Finitely supported probability measure: atoms with positive weights.
struct DiscreteMeasure {
    Vec atoms;    // strictly increasing
    Vec weights;  // positive, summing to 1

    double norm_sq(const Vec& values_at_atoms) const;
};

/// The scalar spectral measure of (T, phi): atoms at the eigenvalues, weights
/// |<v_i, phi>|^2. Requires |phi| = 1, simple eigenvalues (gap > sep_tol) and
/// nonvanishing weights (cyclicity); violations raise DegenerateSpectrum or
/// NotCyclic with the offending index.
DiscreteMeasure spectral_measure(const SymOp& T, const Vec& phi, double sep_tol = -1.0,
                                 double cyc_tol = 1e-10);

/// Unitary from coordinate space onto the weighted coordinate space of a
/// discrete measure: row i maps x to <x, v_i>/<phi, v_i> with the phase
/// convention <phi, v_i> > 0, so that phi maps to the all-ones function and
/// the operator becomes multiplication by the atom.
struct WeightedMap {
    Mat matrix;  // row i evaluates at atom i
    DiscreteMeasure measure;
    Vec phi_components;  // <phi, v_i> after the sign convention, all positive

    Vec apply(const Vec& x) const;
    Vec inverse_apply(const Vec& values_at_atoms) const;
};

WeightedMap canonical_unitary(const SymOp& T, const Vec& phi, double sep_tol = -1.0,
                              double cyc_tol = 1e-10);

/// Divided-difference transform between the spectral representations of T and
/// T + alpha phi phi^T, evaluated on a polynomial f and compared against the
/// composition of the two canonical unitaries.
struct LiawTreilResult {
    DiscreteMeasure mu;        // measure of (T, phi)
    DiscreteMeasure mu_alpha;  // measure of (T + alpha phi phi^T, phi)
    Vec formula_output;        // transform values at the atoms of mu_alpha
    Vec oracle_output;         // U_alpha U^* applied to f's values at mu's atoms
    double discrepancy = 0.0;  // max abs difference
    double unitarity_defect = 0.0;  // | |Vf|_{mu_alpha} - |f|_mu | / (1 + |f|_mu)
};

/// poly_coeffs holds f's coefficients, constant term first. Atom collisions
/// between the two measures within sep_tol raise AtomCollision.
LiawTreilResult liaw_treil_transform(const SymOp& T, const Vec& phi, double alpha,
                                     const Vec& poly_coeffs, double sep_tol = -1.0);

double eval_poly(const Vec& coeffs, double x);

}  // namespace speclab

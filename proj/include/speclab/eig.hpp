#pragma once

#include <cstddef>

#include "speclab/types.hpp"

namespace speclab {

/// Full eigensystem of a SymOp: ascending eigenvalues with matched
/// orthonormal eigenvector columns.
struct EigSystem {
    Vec values;   // ascending, counted with multiplicity
    Mat vectors;  // column i is the eigenvector for values[i]

    std::size_t order() const { return values.size(); }
    Vec column(std::size_t i) const;
    double spectral_radius() const;
};

/// Dense symmetric eigensolver: Householder tridiagonalization followed by
/// implicit-shift QL sweeps. Throws EigFailure if an eigenvalue fails to
/// converge within max_sweeps sweeps.
EigSystem eig_sym(const SymOp& a, int max_sweeps = 60);

enum class IntervalKind { open_below, closed_below };
enum class TiePolicy { reject, resolve };

/// Orthogonal projection onto a half-line spectral subspace.
struct Projector {
    SymOp matrix;
    std::size_t rank = 0;
};

/// Default tie tolerance: 1e-9 * (1 + max |eigenvalue|).
double default_tie_tol(const EigSystem& e);

/// P = sum of v_i v_i^T over eigenvalues below lambda (strictly for
/// open_below, inclusively for closed_below). With TiePolicy::reject, an
/// eigenvalue within tie_tol of lambda raises TieAtThreshold; with resolve
/// the raw comparison decides membership. Pass tie_tol < 0 for the default.
Projector spectral_projector(const EigSystem& e, double lambda,
                             IntervalKind kind = IntervalKind::open_below,
                             TiePolicy policy = TiePolicy::reject,
                             double tie_tol = -1.0);

/// Number of eigenvalues with |value| <= tau.
std::size_t numerical_kernel_dim(const EigSystem& e, double tau);
std::size_t numerical_kernel_dim(const SymOp& a, double tau);

/// Default kernel threshold: order * machine epsilon * spectral radius.
double default_kernel_tol(const EigSystem& e);

/// Smallest |eigenvalue|; for a symmetric matrix this is the smallest
/// singular value.
double min_singular_value(const SymOp& a);

/// order - #{|eigenvalue| <= rel_tol * max |eigenvalue|}; zero matrix has rank 0.
std::size_t numerical_rank(const SymOp& a, double rel_tol = 1e-8);

/// V diag(values) V^T, exactly symmetric. Used by reconstruction oracles.
SymOp reassemble(const EigSystem& e);

/// V diag(coeffs) V^T: a function of the operator applied spectrally.
SymOp assemble_in_basis(const EigSystem& e, const Vec& coeffs);

}  // namespace speclab

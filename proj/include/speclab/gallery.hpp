#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "speclab/eig.hpp"
#include "speclab/quadrature.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// A base operator T together with a finite-rank symmetric perturbation S.
struct OperatorPair {
    SymOp T;
    SymOp S;
    std::size_t rank_S = 0;
    std::vector<Vec> phi;  // orthonormal directions spanning Ran S (may be empty)
    Vec alphas;            // S = sum alphas[k] * phi[k] phi[k]^T when phi is set
    std::string meta;
};

enum class Family {
    DiagExample1,
    DiagExample2,
    KreinPair,
    Carleman,
    Jacobi,
    AlmostMathieu,
    DiscreteSchrodinger,
    RandomSym,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Tagged descriptor of a gallery member; serializable for CLI configs.
struct OperatorSpec {
    Family family = Family::RandomSym;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

/// T = diag(-1, -1/2, ..., -1/n); S = diag(-1 x N, 0, ...). Requires 1 <= N < n.
OperatorPair diag_example_one(std::size_t n, std::size_t N);

/// Two diagonal sequences accumulating at -1 and -1/2 from above, with a
/// diagonal perturbation flipping the approach to from below. Requires n >= 7.
OperatorPair diag_example_two(std::size_t n);

struct NystromParams {
    double length = 40.0;
    std::size_t grid = 0;  // node count; defaults to >= basis_size
};

struct DiscretizationScheme {
    enum Kind { laguerre_galerkin, nystrom } kind = laguerre_galerkin;
    NystromParams ny;  // used when kind == nystrom

    static DiscretizationScheme galerkin() { return {}; }
    static DiscretizationScheme nystrom_on(double length, std::size_t grid) {
        DiscretizationScheme s;
        s.kind = nystrom;
        s.ny = {length, grid};
        return s;
    }
};

/// Discretizations of the pair of integral operators on (0,inf) with kernels
/// sinh(min)e^{-max} (T) and cosh(min)e^{-max} (T+S); their difference is the
/// rank-one kernel e^{-(x+y)}. Entry integrals by adaptive composite
/// Gauss-Legendre, panels doubled until the relative change is below 1e-9.
OperatorPair krein_pair(std::size_t basis_size,
                        DiscretizationScheme scheme = DiscretizationScheme::galerkin());

/// Discretization of the integral operator with kernel 1/(x+y).
SymOp carleman(std::size_t basis_size,
               DiscretizationScheme scheme = DiscretizationScheme::galerkin());

/// Tridiagonal truncation of a_n x_{n+1} + a_{n-1} x_{n-1} + b_n x_n to the
/// window [-m, m] with hard (Dirichlet) cutoff. Requires a_n > 0 on the window.
SymOp jacobi_operator(const std::function<double(long)>& a,
                      const std::function<double(long)>& b, std::size_t m);

/// b_n = 2 kappa cos(2 pi (theta + n beta)), a = 1. Requires kappa != 0.
SymOp almost_mathieu(double kappa, double beta, double theta, std::size_t m);

/// b_n = V(n), a = 1.
SymOp discrete_schrodinger(const std::function<double(long)>& V, std::size_t m);

/// S = sum alpha_k phi_k phi_k^T with the phi_k the internal orthonormalization
/// of `vectors`. Rejects numerically dependent vectors (tolerance 1e-10) and
/// zero alphas.
SymOp rank_perturbation(const std::vector<Vec>& vectors, const Vec& alphas);

/// Orthonormalized vectors as used by rank_perturbation.
std::vector<Vec> orthonormalize_or_reject(const std::vector<Vec>& vectors,
                                          double tol = 1e-10);

struct KrylovBasis {
    Mat basis;            // n x dim, orthonormal columns
    std::size_t dim = 0;  // dim == order iff the seed vector is cyclic
    bool cyclic = false;

    Vec column(std::size_t i) const;
};

/// Gram-Schmidt on (phi, T phi, T^2 phi, ...), stopping when the new
/// direction's norm falls below tol.
KrylovBasis krylov_basis(const SymOp& T, const Vec& phi, double tol);

/// Compares the quadrature route for the sinh-kernel operator applied to
/// x^k e^{-x} against its closed form; returns the max relative deviation
/// over x_grid. Requires 0 <= k <= 8 and x_grid inside (0, L).
double laguerre_reference_apply(std::size_t k, const Vec& x_grid, double L);

/// Closed-form image of x^k e^{-x} under the sinh-kernel operator.
double sinh_kernel_monomial_image(std::size_t k, double x);

/// Builds a gallery pair from a serializable spec at the given size parameter
/// (n for the diagonal families, basis size for the integral operators, the
/// half-window m for lattice operators).
OperatorPair make_operator(const OperatorSpec& spec, std::size_t size);

}  // namespace speclab

#pragma once

#include "speclab/eig.hpp"
#include "speclab/types.hpp"

namespace speclab {

enum class Semibound { below, above };

/// Shifted-resolvent reduction of a semibounded pair to a bounded one.
/// Below: T' = (T + (1+c)I)^{-1} and S' = -(T+S+(1+c)I)^{-1} S (T+(1+c)I)^{-1}
/// with c making both T + cI and T + S + cI nonnegative (unit slack added).
/// Above is the mirror with the shift subtracted.
struct ReductionRecord {
    double c = 0.0;
    Semibound direction = Semibound::below;
    SymOp T_prime;
    SymOp S_prime;
};

ReductionRecord reduce_semibounded(const SymOp& T, const SymOp& S,
                                   Semibound direction = Semibound::below);

/// Spectral-parameter map of the reduction: below mu = 1/(lambda+1+c) for
/// lambda >= -c (strictly decreasing); above mu = 1/(lambda-(1+c)) for
/// lambda <= c. Out-of-range lambda raises OutOfRange; there the difference
/// of projections vanishes identically.
double map_lambda(double lambda, double c, Semibound direction = Semibound::below);

/// Entrywise max deviation between the direct difference of open half-line
/// projections at lambda and the reduced difference of closed half-line
/// projections at mu. Identity contract: <= 1e-9 on well-separated lambda.
double verify_reduction(const SymOp& T, const SymOp& S, double lambda,
                        Semibound direction = Semibound::below);

/// Batch variant sharing the four eigendecompositions across a lambda grid.
Vec verify_reduction_batch(const SymOp& T, const SymOp& S, const Vec& lambdas,
                           Semibound direction = Semibound::below);

}  // namespace speclab

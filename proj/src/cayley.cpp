#include "speclab/cayley.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

namespace {

SymOp shifted_inverse(const EigSystem& e, double shift) {
    Vec coeffs(e.order());
    for (std::size_t i = 0; i < e.order(); ++i) {
        const double denom = e.values[i] + shift;
        if (std::abs(denom) < 1e-12)
            throw SingularShift("shifted operator is numerically singular");
        coeffs[i] = 1.0 / denom;
    }
    return assemble_in_basis(e, coeffs);
}

}  // namespace

ReductionRecord reduce_semibounded(const SymOp& T, const SymOp& S, Semibound direction) {
    if (T.order() != S.order()) throw BadParams("reduce_semibounded: order mismatch");
    const EigSystem et = eig_sym(T);
    const EigSystem ets = eig_sym(T + S);

    ReductionRecord rec;
    rec.direction = direction;
    if (direction == Semibound::below) {
        rec.c = std::max({0.0, -et.values.front(), -ets.values.front()}) + 1.0;
        const double shift = 1.0 + rec.c;
        const SymOp r0 = shifted_inverse(et, shift);
        const SymOp r1 = shifted_inverse(ets, shift);
        rec.T_prime = r0;
        rec.S_prime = SymOp::symmetrized(
            matmul(matmul((-1.0 * r1).matrix(), S.matrix()), r0.matrix()));
    } else {
        rec.c = std::max({0.0, et.values.back(), ets.values.back()}) + 1.0;
        const double shift = -(1.0 + rec.c);
        const SymOp r0 = shifted_inverse(et, shift);
        const SymOp r1 = shifted_inverse(ets, shift);
        rec.T_prime = r0;
        rec.S_prime = SymOp::symmetrized(
            matmul(matmul((-1.0 * r1).matrix(), S.matrix()), r0.matrix()));
    }
    return rec;
}

double map_lambda(double lambda, double c, Semibound direction) {
    if (direction == Semibound::below) {
        if (lambda < -c)
            throw OutOfRange("lambda below -c: the projection difference vanishes there");
        return 1.0 / (lambda + 1.0 + c);
    }
    if (lambda > c)
        throw OutOfRange("lambda above c: the projection difference vanishes there");
    return 1.0 / (lambda - (1.0 + c));
}

Vec verify_reduction_batch(const SymOp& T, const SymOp& S, const Vec& lambdas,
                           Semibound direction) {
    const ReductionRecord rec = reduce_semibounded(T, S, direction);
    const EigSystem et = eig_sym(T);
    const EigSystem ets = eig_sym(T + S);
    const EigSystem etp = eig_sym(rec.T_prime);
    const EigSystem etsp = eig_sym(rec.T_prime + rec.S_prime);

    Vec deviations;
    deviations.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const double mu = map_lambda(lambda, rec.c, direction);
        const Projector p = spectral_projector(ets, lambda, IntervalKind::open_below);
        const Projector q = spectral_projector(et, lambda, IntervalKind::open_below);
        const SymOp direct = p.matrix - q.matrix;

        const Projector qp = spectral_projector(etp, mu, IntervalKind::closed_below);
        const Projector pp = spectral_projector(etsp, mu, IntervalKind::closed_below);
        const SymOp reduced = qp.matrix - pp.matrix;

        deviations.push_back(max_abs(direct - reduced));
    }
    return deviations;
}

double verify_reduction(const SymOp& T, const SymOp& S, double lambda, Semibound direction) {
    return verify_reduction_batch(T, S, {lambda}, direction).front();
}

}  // namespace speclab

#include "speclab/liaw_treil.hpp"

#include <cmath>

namespace speclab {

double DiscreteMeasure::norm_sq(const Vec& values_at_atoms) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        s += weights[i] * values_at_atoms[i] * values_at_atoms[i];
    return s;
}

double eval_poly(const Vec& coeffs, double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
}

namespace {

struct MeasureData {
    EigSystem eig;
    Vec components;  // <phi, v_i>, sign-fixed positive
    DiscreteMeasure measure;
};

MeasureData measure_data(const SymOp& T, const Vec& phi, double sep_tol, double cyc_tol) {
    if (phi.size() != T.order()) throw BadParams("spectral_measure: dimension mismatch");
    if (std::abs(norm2(phi) - 1.0) > 1e-12)
        throw BadParams("spectral_measure: phi must be a unit vector");

    MeasureData md;
    md.eig = eig_sym(T);
    if (sep_tol < 0.0) sep_tol = 1e-8 * (1.0 + md.eig.spectral_radius());
    for (std::size_t i = 0; i + 1 < md.eig.order(); ++i)
        if (md.eig.values[i + 1] - md.eig.values[i] <= sep_tol)
            throw DegenerateSpectrum(i);

    const std::size_t n = md.eig.order();
    md.components.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c = 0.0;
        for (std::size_t k = 0; k < n; ++k) c += phi[k] * md.eig.vectors(k, i);
        if (std::abs(c) < cyc_tol) throw NotCyclic(i);
        if (c < 0.0) {
            for (std::size_t k = 0; k < n; ++k) md.eig.vectors(k, i) = -md.eig.vectors(k, i);
            c = -c;
        }
        md.components[i] = c;
    }
    md.measure.atoms = md.eig.values;
    md.measure.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        md.measure.weights[i] = md.components[i] * md.components[i];
    return md;
}

}  // namespace

DiscreteMeasure spectral_measure(const SymOp& T, const Vec& phi, double sep_tol,
                                 double cyc_tol) {
    return measure_data(T, phi, sep_tol, cyc_tol).measure;
}

Vec WeightedMap::apply(const Vec& x) const {
    Vec out(matrix.rows(), 0.0);
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const double* row = matrix.row_ptr(i);
        double s = 0.0;
        for (std::size_t k = 0; k < matrix.cols(); ++k) s += row[k] * x[k];
        out[i] = s;
    }
    return out;
}

Vec WeightedMap::inverse_apply(const Vec& values_at_atoms) const {
    // x = sum_i c_i g_i v_i recovers the vector whose image takes the given
    // values; v_i is row i of the map scaled back by c_i.
    const std::size_t n = matrix.rows();
    Vec x(matrix.cols(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ci = phi_components[i];
        const double w = ci * values_at_atoms[i];
        const double* row = matrix.row_ptr(i);
        // row k of the unitary is v_i / c_i, so v_i[k] = row[k] * c_i
        for (std::size_t k = 0; k < matrix.cols(); ++k) x[k] += w * ci * row[k];
    }
    return x;
}

WeightedMap canonical_unitary(const SymOp& T, const Vec& phi, double sep_tol,
                              double cyc_tol) {
    const MeasureData md = measure_data(T, phi, sep_tol, cyc_tol);
    const std::size_t n = md.eig.order();
    WeightedMap map;
    map.matrix = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            map.matrix(i, k) = md.eig.vectors(k, i) / md.components[i];
    map.measure = md.measure;
    map.phi_components = md.components;
    return map;
}

LiawTreilResult liaw_treil_transform(const SymOp& T, const Vec& phi, double alpha,
                                     const Vec& poly_coeffs, double sep_tol) {
    if (alpha == 0.0) throw BadParams("liaw_treil_transform: alpha must be nonzero");
    if (poly_coeffs.empty()) throw BadParams("liaw_treil_transform: empty polynomial");

    const SymOp S = outer_sum({phi}, {alpha});
    const WeightedMap u = canonical_unitary(T, phi, sep_tol);
    const WeightedMap u_alpha = canonical_unitary(T + S, phi, sep_tol);

    const Vec& t_atoms = u.measure.atoms;
    const Vec& s_atoms = u_alpha.measure.atoms;
    if (sep_tol < 0.0) {
        const double rad = std::max(std::abs(t_atoms.front()), std::abs(t_atoms.back()));
        sep_tol = 1e-8 * (1.0 + rad);
    }
    for (double x : s_atoms)
        for (double t : t_atoms)
            if (std::abs(x - t) <= sep_tol)
                throw AtomCollision("atoms of the two spectral measures collide at " +
                                    std::to_string(x));

    LiawTreilResult res;
    res.mu = u.measure;
    res.mu_alpha = u_alpha.measure;

    Vec f_at_t(t_atoms.size());
    for (std::size_t i = 0; i < t_atoms.size(); ++i)
        f_at_t[i] = eval_poly(poly_coeffs, t_atoms[i]);

    res.formula_output.resize(s_atoms.size());
    for (std::size_t k = 0; k < s_atoms.size(); ++k) {
        const double x = s_atoms[k];
        const double fx = eval_poly(poly_coeffs, x);
        double integral = 0.0;
        for (std::size_t i = 0; i < t_atoms.size(); ++i)
            integral += u.measure.weights[i] * (fx - f_at_t[i]) / (x - t_atoms[i]);
        res.formula_output[k] = fx - alpha * integral;
    }

    res.oracle_output = u_alpha.apply(u.inverse_apply(f_at_t));

    for (std::size_t k = 0; k < s_atoms.size(); ++k)
        res.discrepancy = std::max(
            res.discrepancy, std::abs(res.formula_output[k] - res.oracle_output[k]));

    const double norm_in = std::sqrt(res.mu.norm_sq(f_at_t));
    const double norm_out = std::sqrt(res.mu_alpha.norm_sq(res.formula_output));
    res.unitarity_defect = std::abs(norm_out - norm_in) / (1.0 + norm_in);
    return res;
}

}  // namespace speclab

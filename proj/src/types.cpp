#include "speclab/types.hpp"

#include <algorithm>

namespace speclab {

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw BadParams("matmul: shape mismatch");
    Mat c(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Mat transposed(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

SymOp SymOp::identity(std::size_t n) {
    Mat m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return SymOp(std::move(m));
}

SymOp SymOp::diagonal(const Vec& d) {
    Mat m(d.size(), d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i])) throw BadParams("diagonal: non-finite entry");
        m(i, i) = d[i];
    }
    return SymOp(std::move(m));
}

SymOp SymOp::symmetrized(const Mat& m) {
    if (m.rows() != m.cols()) throw BadParams("symmetrized: matrix not square");
    const std::size_t n = m.rows();
    Mat s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            if (!std::isfinite(v)) throw BadParams("symmetrized: non-finite entry");
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return SymOp(std::move(s));
}

SymOp SymOp::adopt_symmetric(Mat m) {
    if (m.rows() != m.cols()) throw BadParams("adopt_symmetric: matrix not square");
    for (double v : m.data())
        if (!std::isfinite(v)) throw BadParams("adopt_symmetric: non-finite entry");
    return SymOp(std::move(m));
}

Vec SymOp::apply(const Vec& x) const {
    if (x.size() != order()) throw BadParams("apply: dimension mismatch");
    Vec y(order(), 0.0);
    for (std::size_t i = 0; i < order(); ++i) {
        const double* ri = mat_.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < order(); ++j) s += ri[j] * x[j];
        y[i] = s;
    }
    return y;
}

SymOp operator+(const SymOp& a, const SymOp& b) {
    if (a.order() != b.order()) throw BadParams("operator+: order mismatch");
    Mat m = a.mat_;
    for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] += b.mat_.data()[i];
    return SymOp(std::move(m));
}

SymOp operator-(const SymOp& a, const SymOp& b) {
    if (a.order() != b.order()) throw BadParams("operator-: order mismatch");
    Mat m = a.mat_;
    for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] -= b.mat_.data()[i];
    return SymOp(std::move(m));
}

SymOp operator*(double s, const SymOp& a) {
    Mat m = a.mat_;
    for (double& v : m.data()) v *= s;
    return SymOp(std::move(m));
}

double max_abs(const SymOp& a) { return max_abs(a.matrix()); }

SymOp outer_sum(const std::vector<Vec>& vectors, const Vec& alphas) {
    if (vectors.size() != alphas.size()) throw BadParams("outer_sum: size mismatch");
    if (vectors.empty()) throw BadParams("outer_sum: no vectors");
    const std::size_t n = vectors.front().size();
    Mat m(n, n, 0.0);
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const Vec& v = vectors[k];
        if (v.size() != n) throw BadParams("outer_sum: inconsistent dimensions");
        for (std::size_t i = 0; i < n; ++i) {
            const double avi = alphas[k] * v[i];
            for (std::size_t j = i; j < n; ++j) m(i, j) += avi * v[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    return SymOp::adopt_symmetric(std::move(m));
}

}  // namespace speclab

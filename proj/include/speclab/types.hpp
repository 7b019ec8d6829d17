#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace speclab {

using Vec = std::vector<double>;

/// Base class for all errors raised by the library.
struct LabError : std::runtime_error {
    explicit LabError(const std::string& what) : std::runtime_error(what) {}
};

struct BadParams : LabError {
    explicit BadParams(const std::string& what) : LabError(what) {}
};

/// Eigensolver did not converge within the sweep budget.
struct EigFailure : LabError {
    double residual;
    explicit EigFailure(double res)
        : LabError("eigensolver failed to converge; off-diagonal residual " +
                   std::to_string(res)),
          residual(res) {}
};

/// An eigenvalue sits within tie tolerance of a half-line threshold.
struct TieAtThreshold : LabError {
    double eigenvalue;
    double threshold;
    TieAtThreshold(double ev, double thr)
        : LabError("eigenvalue " + std::to_string(ev) +
                   " ties with threshold " + std::to_string(thr)),
          eigenvalue(ev), threshold(thr) {}
};

struct QuadratureFailure : LabError {
    explicit QuadratureFailure(const std::string& what) : LabError(what) {}
};

struct NotAProjectionDifference : LabError {
    explicit NotAProjectionDifference(const std::string& what) : LabError(what) {}
};

struct CorrectionInfeasible : LabError {
    std::size_t required_budget;
    explicit CorrectionInfeasible(std::size_t needed)
        : LabError("correction infeasible: shift budget of length " +
                   std::to_string(needed) + " required"),
          required_budget(needed) {}
};

struct GapNotEmpty : LabError {
    explicit GapNotEmpty(const std::string& what) : LabError(what) {}
};

struct NothingToCheck : LabError {
    explicit NothingToCheck(const std::string& what) : LabError(what) {}
};

struct ProbeExhausted : LabError {
    explicit ProbeExhausted(const std::string& what) : LabError(what) {}
};

struct DegenerateSpectrum : LabError {
    std::size_t index;
    explicit DegenerateSpectrum(std::size_t idx)
        : LabError("eigenvalues " + std::to_string(idx) + " and " +
                   std::to_string(idx + 1) + " are numerically equal"),
          index(idx) {}
};

struct NotCyclic : LabError {
    std::size_t index;
    explicit NotCyclic(std::size_t idx)
        : LabError("vector has vanishing component on eigenvector " +
                   std::to_string(idx)),
          index(idx) {}
};

struct AtomCollision : LabError {
    explicit AtomCollision(const std::string& what) : LabError(what) {}
};

struct OutOfRange : LabError {
    explicit OutOfRange(const std::string& what) : LabError(what) {}
};

struct SingularShift : LabError {
    explicit SingularShift(const std::string& what) : LabError(what) {}
};

/// Dense row-major matrix. Plain storage, no view semantics.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    const Vec& data() const { return data_; }
    Vec& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

Mat matmul(const Mat& a, const Mat& b);
Mat transposed(const Mat& a);
double max_abs(const Mat& a);

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

void axpy(double a, const Vec& x, Vec& y);  // y += a*x

/// Real symmetric matrix of finite order. Entries are exactly symmetric
/// and finite; construction enforces both.
class SymOp {
public:
    SymOp() = default;

    static SymOp zero(std::size_t n) { return SymOp(Mat(n, n, 0.0)); }
    static SymOp identity(std::size_t n);
    static SymOp diagonal(const Vec& d);

    /// Builds (M + M^T)/2 entrywise; rejects non-finite input.
    static SymOp symmetrized(const Mat& m);

    /// Adopts a matrix the caller guarantees to be exactly symmetric
    /// (cheap path for algebra that preserves symmetry by construction).
    static SymOp adopt_symmetric(Mat m);

    std::size_t order() const { return mat_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
    const Mat& matrix() const { return mat_; }

    Vec apply(const Vec& x) const;

    friend SymOp operator+(const SymOp& a, const SymOp& b);
    friend SymOp operator-(const SymOp& a, const SymOp& b);
    friend SymOp operator*(double s, const SymOp& a);

private:
    explicit SymOp(Mat m) : mat_(std::move(m)) {}
    Mat mat_;
};

double max_abs(const SymOp& a);

/// Sum of alpha_k * (v_k v_k^T) with exactly symmetric output.
SymOp outer_sum(const std::vector<Vec>& vectors, const Vec& alphas);

}  // namespace speclab

#include "speclab/hankel.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/eig.hpp"

namespace speclab {

HankelSymbol HankelSymbol::from_scalars(Vec entries) {
    if (entries.empty() || entries.size() % 2 == 0)
        throw BadParams("hankel symbol: entry count must be odd (2n-1)");
    for (double v : entries)
        if (!std::isfinite(v)) throw BadParams("hankel symbol: non-finite entry");
    HankelSymbol s;
    s.scalars = std::move(entries);
    return s;
}

HankelSymbol HankelSymbol::from_blocks(std::vector<Mat> blocks) {
    if (blocks.empty() || blocks.size() % 2 == 0)
        throw BadParams("hankel symbol: block count must be odd (2n-1)");
    const std::size_t N = blocks.front().rows();
    for (const Mat& b : blocks) {
        if (b.rows() != N || b.cols() != N)
            throw BadParams("hankel symbol: blocks must be square of equal size");
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                if (!std::isfinite(b(i, j)))
                    throw BadParams("hankel symbol: non-finite block entry");
                if (b(i, j) != b(j, i))
                    throw BadParams("hankel symbol: blocks must be symmetric");
            }
    }
    HankelSymbol s;
    s.blocks = std::move(blocks);
    return s;
}

SymOp hankel_from_symbol(const HankelSymbol& s) {
    const std::size_t n = (s.count() + 1) / 2;
    if (!s.is_block()) {
        Mat h(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) h(j, k) = s.scalars[j + k];
        return SymOp::adopt_symmetric(std::move(h));
    }
    const std::size_t N = s.blocks.front().rows();
    Mat h(n * N, n * N);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const Mat& b = s.blocks[j + k];
            for (std::size_t r = 0; r < N; ++r)
                for (std::size_t c = 0; c < N; ++c) h(j * N + r, k * N + c) = b(r, c);
        }
    return SymOp::adopt_symmetric(std::move(h));
}

namespace {

// Singular values of a general square matrix via the eigenvalues of C^T C.
Vec singular_values_desc(const Mat& c) {
    const std::size_t n = c.rows();
    if (n == 0) return {};
    const Mat ctc = matmul(transposed(c), c);
    const EigSystem e = eig_sym(SymOp::symmetrized(ctc));
    Vec s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = std::sqrt(std::max(0.0, e.values[n - 1 - i]));
    return s;
}

}  // namespace

CommutatorDefect commutator_defect(const SymOp& H) {
    const std::size_t n = H.order();
    // C[j][k] = H[j+1][k] - H[j][k+1], with out-of-range terms dropped by the
    // shift truncation.
    Mat c(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const double up = (j + 1 < n) ? H(j + 1, k) : 0.0;
            const double right = (k + 1 < n) ? H(j, k + 1) : 0.0;
            c(j, k) = up - right;
        }

    CommutatorDefect out;
    const Vec full = singular_values_desc(c);
    out.full_norm = full.empty() ? 0.0 : full.front();
    out.top_singulars.assign(full.begin(),
                             full.begin() + std::min<std::size_t>(5, full.size()));

    if (n > 1) {
        Mat interior(n - 1, n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j)
            for (std::size_t k = 0; k + 1 < n; ++k) interior(j, k) = c(j, k);
        const Vec si = singular_values_desc(interior);
        out.interior_norm = si.empty() ? 0.0 : si.front();
    }
    return out;
}

}  // namespace speclab

#pragma once

#include "speclab/types.hpp"

namespace speclab {

/// Symbol of a finite Hankel matrix: 2n-1 scalars, or 2n-1 symmetric N x N
/// blocks for the block-Hankel matrix of order N.
struct HankelSymbol {
    Vec scalars;             // used when blocks is empty
    std::vector<Mat> blocks; // each square, symmetric, same size

    static HankelSymbol from_scalars(Vec entries);
    static HankelSymbol from_blocks(std::vector<Mat> blocks);

    bool is_block() const { return !blocks.empty(); }
    std::size_t count() const { return is_block() ? blocks.size() : scalars.size(); }
};

/// H[j][k] = s[j+k]; in the block case the (j,k) block is blocks[j+k].
/// Requires an odd entry count 2n-1.
SymOp hankel_from_symbol(const HankelSymbol& s);

/// Commutator A^T H - H A with A the truncated forward shift. For an exact
/// Hankel matrix the leading (n-1) x (n-1) block cancels; only the last row
/// and column survive the truncation.
struct CommutatorDefect {
    double interior_norm = 0.0;  // spectral norm of the leading (n-1)x(n-1) block
    double full_norm = 0.0;      // spectral norm of the whole commutator
    Vec top_singulars;           // 5 largest singular values, descending
};

CommutatorDefect commutator_defect(const SymOp& H);

}  // namespace speclab

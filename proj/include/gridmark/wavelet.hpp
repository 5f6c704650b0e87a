#pragma once

#include "gridmark/matrix.hpp"

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace gridmark {

// One orthonormal 2D Haar step.
struct QuadBands {
    Matrix ca, ch, cv, cd;
};

QuadBands dwt2(const Matrix& m);
Matrix idwt2(const QuadBands& b);

/// Three-level decomposition that descends into the detail bands:
/// level 2 splits level-1 ch and cv, level 3 splits the ch and cv of each
/// level-2 decomposition. Index layout:
///   level2[0] = dwt2(level1.ch), level2[1] = dwt2(level1.cv)
///   level3[2*k + 0] = dwt2(level2[k].ch), level3[2*k + 1] = dwt2(level2[k].cv)
struct DetailTree {
    QuadBands level1;
    std::array<QuadBands, 2> level2;
    std::array<QuadBands, 4> level3;

    // Embedding subbands in canonical order: index b selects
    // level3[b / 2].ch (b even) or level3[b / 2].cv (b odd).
    static constexpr int kEmbedBands = 8;
    Matrix& embed_band(int b);
    const Matrix& embed_band(int b) const;
};

// "H.V.H" = level-3 ch of (level-2 cv of level-1 ch).
std::string embed_band_path(int b);

DetailTree decompose3(const Matrix& m);
Matrix reconstruct3(const DetailTree& t);

// All 28 matrices of the tree keyed by path, level by level.
std::vector<std::pair<std::string, const Matrix*>> tree_bands(const DetailTree& t);

// Debug dump: "TREE <N>" then one "BAND <path>" block per matrix.
void dump_tree(const DetailTree& t, std::ostream& out);

} // namespace gridmark

#pragma once

#include <vector>

#include "cuecorr/partitions.hpp"
#include "cuecorr/rational.hpp"

namespace cuecorr::detail {

// Row-reduced form of an integer constraint system A t = 0 on cols
// variables, eliminated over exact rationals. Pivot columns are chosen
// scanning right to left, which keeps the trailing "closure" coordinate of
// every window out of the free set — the free coordinates are then always
// ones a test-function transform actually sees, so lattice enumerations and
// integrals can bound them by the transform's support box.
struct EchelonSystem {
    int cols = 0;
    int rank = 0;
    std::vector<int> pivot_cols;  // descending (right-to-left scan order)
    std::vector<int> free_cols;   // ascending

    // reconstruction[c][j]: integer coefficient of the j-th free coordinate
    // in coordinate c. Each constraint matrix here has two ones per column
    // (one window row, one block row), so the system is totally unimodular
    // and the reduced solution map is integral; non-integrality is a bug.
    std::vector<std::vector<long long>> reconstruction;
};

EchelonSystem reduce_constraints(const std::vector<std::vector<long long>>& rows, int cols);

// Constraint rows for L_pi: one zero-sum row per window of w, one per block
// of pi (rows are 0/1 indicators over the m*l coordinates).
std::vector<std::vector<long long>> window_block_constraints(const SetPartition& pi,
                                                             const WindowStructure& w);

}  // namespace cuecorr::detail

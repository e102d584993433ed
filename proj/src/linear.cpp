#include "cuecorr/linear.hpp"

#include <string>

namespace cuecorr::detail {

std::vector<std::vector<long long>> window_block_constraints(const SetPartition& pi,
                                                             const WindowStructure& w) {
    const int cols = w.ground_size();
    std::vector<std::vector<long long>> rows;
    rows.reserve(w.m + pi.block_count());
    for (int win = 0; win < w.m; ++win) {
        auto& r = rows.emplace_back(cols, 0);
        for (int c = win * w.l; c < (win + 1) * w.l; ++c) r[c] = 1;
    }
    for (const auto& b : pi.blocks) {
        auto& r = rows.emplace_back(cols, 0);
        for (int e : b) r[e] = 1;
    }
    return rows;
}

EchelonSystem reduce_constraints(const std::vector<std::vector<long long>>& rows_in, int cols) {
    std::vector<std::vector<Rational>> m(rows_in.size());
    for (std::size_t r = 0; r < rows_in.size(); ++r) {
        if (static_cast<int>(rows_in[r].size()) != cols)
            throw consistency_error("reduce_constraints: ragged constraint row");
        m[r].assign(rows_in[r].begin(), rows_in[r].end());
    }

    EchelonSystem sys;
    sys.cols = cols;
    std::vector<int> pivot_row_of_col(cols, -1);
    std::vector<bool> row_used(m.size(), false);

    for (int c = cols - 1; c >= 0; --c) {
        int pr = -1;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (!row_used[r] && !m[r][c].is_zero()) {
                pr = static_cast<int>(r);
                break;
            }
        }
        if (pr < 0) continue;  // free column

        row_used[pr] = true;
        pivot_row_of_col[c] = pr;
        sys.pivot_cols.push_back(c);

        const Rational inv = Rational(1) / m[pr][c];
        for (int j = 0; j < cols; ++j) m[pr][j] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (static_cast<int>(r) == pr || m[r][c].is_zero()) continue;
            const Rational f = m[r][c];
            for (int j = 0; j < cols; ++j) m[r][j] -= f * m[pr][j];
        }
    }

    sys.rank = static_cast<int>(sys.pivot_cols.size());
    for (int c = 0; c < cols; ++c)
        if (pivot_row_of_col[c] < 0) sys.free_cols.push_back(c);

    const int nfree = static_cast<int>(sys.free_cols.size());
    sys.reconstruction.assign(cols, std::vector<long long>(nfree, 0));
    for (int j = 0; j < nfree; ++j) sys.reconstruction[sys.free_cols[j]][j] = 1;
    for (int c : sys.pivot_cols) {
        const auto& row = m[pivot_row_of_col[c]];
        for (int j = 0; j < nfree; ++j) {
            const Rational v = -row[sys.free_cols[j]];
            if (!v.is_integer())
                throw consistency_error(
                    "reduce_constraints: non-integral reconstruction in column " +
                    std::to_string(c) + " (constraint matrix not totally unimodular?)");
            sys.reconstruction[c][j] = v.as_integer();
        }
    }
    return sys;
}

}  // namespace cuecorr::detail

/*
 * Dense exact linear algebra over the rationals: row reduction, rank and
 * right-nullspace bases for the small constraint matrices that come out
 * of face boundaries. No pivoting heuristics are needed in exact
 * arithmetic; the first nonzero entry wins, which keeps results
 * deterministic.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "catform/rational.hpp"

namespace catform {

using RatMatrix = std::vector<std::vector<Rat>>;

/// Reduces m in place to reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> reduce_rows(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        const Rat inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rat factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(RatMatrix m) { return reduce_rows(m).size(); }

/// Basis of {x : m x = 0}, over `cols` unknowns (m may have zero rows).
inline std::vector<std::vector<Rat>> nullspace(RatMatrix m, std::size_t cols) {
    for (auto& row : m) row.resize(cols, Rat(0));
    const std::vector<std::size_t> pivots = reduce_rows(m);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Rat>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace catform

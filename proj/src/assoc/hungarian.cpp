/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/assoc/hungarian.cpp
 *
 * Copyright 2026 The vpe authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "vpe/assoc/hungarian.hpp"

#include <cmath>
#include <limits>

#include "vpe/core/error.hpp"

namespace vpe::assoc {

namespace {

// Potential-based shortest augmenting path formulation, O(n^2 m) for an
// n x m matrix with n <= m. Every row ends up assigned.
std::vector<int> solve_rows_le_cols(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(m) + 1, 0);  // row matched to column, 1-based
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= m; ++j) {
        if (match[static_cast<std::size_t>(j)] != 0) {
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
        }
    }
    return row_to_col;
}

} // namespace

Assignment hungarian_assign(const Eigen::MatrixXd& cost) {
    if (!cost.allFinite()) {
        raise(errc::config, "hungarian_assign: costs must be finite");
    }
    Assignment result;
    result.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    if (cost.rows() == 0 || cost.cols() == 0) return result;

    if (cost.rows() <= cost.cols()) {
        result.row_to_col = solve_rows_le_cols(cost);
    } else {
        const std::vector<int> col_to_row = solve_rows_le_cols(cost.transpose());
        for (std::size_t c = 0; c < col_to_row.size(); ++c) {
            result.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
        }
    }
    for (std::size_t r = 0; r < result.row_to_col.size(); ++r) {
        if (result.row_to_col[r] >= 0) {
            result.total_cost += cost(static_cast<Eigen::Index>(r), result.row_to_col[r]);
        }
    }
    return result;
}

} // namespace vpe::assoc

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/assoc/hungarian.hpp
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
#pragma once

#include <vector>

#include <Eigen/Core>

namespace vpe::assoc {

struct Assignment {
    /// Column per row, -1 when the row is left out (more rows than columns).
    std::vector<int> row_to_col;
    double total_cost = 0.0;
};

/**
 * Minimum-cost assignment for a rectangular matrix: the smaller side is
 * matched completely, injectively, minimizing the summed cost. Costs must
 * be finite; callers encode forbidden pairs as a large penalty and strip
 * them afterwards.
 */
Assignment hungarian_assign(const Eigen::MatrixXd& cost);

} // namespace vpe::assoc

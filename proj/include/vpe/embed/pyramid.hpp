/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/embed/pyramid.hpp
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

namespace vpe::embed {

/// One pyramid level: a feature vector per spatial position. After
/// normalization, `mean` and `stddev` hold the per-channel statistics that
/// were removed.
struct PyramidLevel {
    int level_index = 0;
    std::vector<Eigen::VectorXd> features;
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
};

/// Channels whose spread falls below this floor are shifted but not scaled,
/// so constant channels map to zero instead of blowing up.
inline constexpr double kStddevFloor = 1e-8;

/**
 * Z-score normalization applied independently per level: every channel is
 * centered by the level mean and divided by the level standard deviation
 * (population form, floored). Levels do not mix.
 */
std::vector<PyramidLevel> normalize_pyramid(std::vector<PyramidLevel> levels);

} // namespace vpe::embed

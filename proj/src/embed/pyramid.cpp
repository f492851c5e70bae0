/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/embed/pyramid.cpp
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
#include "vpe/embed/pyramid.hpp"

#include <cmath>

#include "vpe/core/error.hpp"

namespace vpe::embed {

std::vector<PyramidLevel> normalize_pyramid(std::vector<PyramidLevel> levels) {
    for (auto& level : levels) {
        if (level.features.empty()) {
            raise(errc::config, "pyramid level has no features");
        }
        const Eigen::Index channels = level.features.front().size();
        for (const auto& f : level.features) {
            if (f.size() != channels) {
                raise(errc::dimension_mismatch, "pyramid level mixes feature lengths");
            }
        }
        const double count = static_cast<double>(level.features.size());

        Eigen::VectorXd mean = Eigen::VectorXd::Zero(channels);
        for (const auto& f : level.features) mean += f;
        mean /= count;

        Eigen::VectorXd variance = Eigen::VectorXd::Zero(channels);
        for (const auto& f : level.features) {
            variance += (f - mean).cwiseAbs2();
        }
        variance /= count;

        level.mean = mean;
        level.stddev = variance.cwiseSqrt();
        for (auto& f : level.features) {
            for (Eigen::Index c = 0; c < channels; ++c) {
                f[c] = (f[c] - mean[c]) / std::max(level.stddev[c], kStddevFloor);
            }
        }
    }
    return levels;
}

} // namespace vpe::embed

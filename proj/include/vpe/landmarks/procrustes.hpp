/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/landmarks/procrustes.hpp
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

#include "vpe/landmarks/shape.hpp"

namespace vpe::landmarks {

/// p -> scale * R(rotation) * p + translation
struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0;
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();

    Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
    Shape apply(const Shape& s) const;
    SimilarityTransform inverse() const;
};

/// Sum of squared point distances after applying t to src.
double alignment_residual(const SimilarityTransform& t, const Shape& src, const Shape& dst);

/**
 * Least-squares similarity (scale, rotation, translation) mapping src
 * toward dst; the closed form minimizes the summed squared residual over
 * all similarity transforms. Needs >= 2 points with at least two distinct
 * source locations.
 */
SimilarityTransform similarity_transform(const Shape& src, const Shape& dst);

/// Eye corners, nose tip, and mouth corners in the 68-point markup.
inline const std::vector<int> kDefaultAlignmentIndices = {36, 39, 42, 45, 30, 48, 54};

/**
 * Selects `indices` rows from the detected landmarks and solves the
 * similarity transform onto the canonical points (one canonical row per
 * selected index).
 */
SimilarityTransform align_face(const Shape& landmarks, const std::vector<int>& indices,
                               const Shape& canonical);

} // namespace vpe::landmarks

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/assoc/geometry.hpp
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

#include <optional>

#include <Eigen/Core>

namespace vpe::assoc {

/// Axis-aligned box, top-left anchored, in pixels.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
    bool valid() const { return width > 0.0 && height > 0.0; }
};

double intersection_area(const BoundingBox& a, const BoundingBox& b);

/**
 * Intersection area over the area of the tracked box. Deliberately
 * asymmetric: a detection fully covering a tracked box scores 1 even if
 * the detection is larger. Raises on a zero-area tracked box.
 */
double overlap_ratio(const BoundingBox& detected, const BoundingBox& tracked);

struct Detection {
    BoundingBox box;
    long frame = 0;
    double confidence = 0.0;
    std::optional<Eigen::VectorXd> appearance;
};

} // namespace vpe::assoc

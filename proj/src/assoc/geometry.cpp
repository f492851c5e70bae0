/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/assoc/geometry.cpp
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
#include "vpe/assoc/geometry.hpp"

#include <algorithm>

#include "vpe/core/error.hpp"

namespace vpe::assoc {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double w = std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x);
    const double h = std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double overlap_ratio(const BoundingBox& detected, const BoundingBox& tracked) {
    if (tracked.area() <= 0.0) {
        raise(errc::degenerate_input, "overlap_ratio: tracked box has zero area");
    }
    return intersection_area(detected, tracked) / tracked.area();
}

} // namespace vpe::assoc

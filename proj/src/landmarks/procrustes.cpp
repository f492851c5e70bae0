/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/landmarks/procrustes.cpp
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
#include "vpe/landmarks/procrustes.hpp"

#include <cmath>

#include "vpe/core/error.hpp"

namespace vpe::landmarks {

Eigen::Vector2d SimilarityTransform::apply(const Eigen::Vector2d& p) const {
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return Eigen::Vector2d(scale * (c * p.x() - s * p.y()) + translation.x(),
                           scale * (s * p.x() + c * p.y()) + translation.y());
}

Shape SimilarityTransform::apply(const Shape& s) const {
    Shape out(s.rows(), 2);
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        out.row(i) = apply(Eigen::Vector2d(s(i, 0), s(i, 1))).transpose();
    }
    return out;
}

SimilarityTransform SimilarityTransform::inverse() const {
    if (scale == 0.0) {
        raise(errc::degenerate_input, "zero-scale transform has no inverse");
    }
    SimilarityTransform inv;
    inv.scale = 1.0 / scale;
    inv.rotation = -rotation;
    const double c = std::cos(inv.rotation);
    const double s = std::sin(inv.rotation);
    inv.translation = Eigen::Vector2d(
        -inv.scale * (c * translation.x() - s * translation.y()),
        -inv.scale * (s * translation.x() + c * translation.y()));
    return inv;
}

double alignment_residual(const SimilarityTransform& t, const Shape& src, const Shape& dst) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < src.rows(); ++i) {
        const Eigen::Vector2d mapped = t.apply(Eigen::Vector2d(src(i, 0), src(i, 1)));
        total += (mapped - Eigen::Vector2d(dst(i, 0), dst(i, 1))).squaredNorm();
    }
    return total;
}

SimilarityTransform similarity_transform(const Shape& src, const Shape& dst) {
    if (src.rows() != dst.rows()) {
        raise(errc::dimension_mismatch, "similarity_transform: point counts differ");
    }
    if (src.rows() < 2) {
        raise(errc::config, "similarity_transform: needs at least two points");
    }
    const Eigen::RowVector2d src_mean = src.colwise().mean();
    const Eigen::RowVector2d dst_mean = dst.colwise().mean();

    // Centered correlation terms. `dot` aligns parallel components,
    // `cross` the perpendicular ones; together they fix the rotation.
    double dot = 0.0;
    double cross = 0.0;
    double src_spread = 0.0;
    for (Eigen::Index i = 0; i < src.rows(); ++i) {
        const Eigen::RowVector2d a = src.row(i) - src_mean;
        const Eigen::RowVector2d b = dst.row(i) - dst_mean;
        dot += a.x() * b.x() + a.y() * b.y();
        cross += a.x() * b.y() - a.y() * b.x();
        src_spread += a.squaredNorm();
    }
    if (src_spread < 1e-12) {
        raise(errc::degenerate_input, "similarity_transform: source points are coincident");
    }

    SimilarityTransform t;
    t.rotation = std::atan2(cross, dot);
    t.scale = std::sqrt(dot * dot + cross * cross) / src_spread;
    const double c = std::cos(t.rotation);
    const double s = std::sin(t.rotation);
    t.translation = Eigen::Vector2d(
        dst_mean.x() - t.scale * (c * src_mean.x() - s * src_mean.y()),
        dst_mean.y() - t.scale * (s * src_mean.x() + c * src_mean.y()));
    return t;
}

SimilarityTransform align_face(const Shape& landmarks, const std::vector<int>& indices,
                               const Shape& canonical) {
    if (static_cast<Eigen::Index>(indices.size()) != canonical.rows()) {
        raise(errc::dimension_mismatch, "align_face: index count differs from canonical points");
    }
    Shape selected(static_cast<Eigen::Index>(indices.size()), 2);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= landmarks.rows()) {
            raise(errc::config, "align_face: landmark index out of range");
        }
        selected.row(static_cast<Eigen::Index>(i)) = landmarks.row(indices[i]);
    }
    return similarity_transform(selected, canonical);
}

} // namespace vpe::landmarks

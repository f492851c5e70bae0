/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/landmarks/shape.hpp
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

#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace vpe::landmarks {

/// L landmark points as an L x 2 matrix of pixel coordinates.
using Shape = Eigen::MatrixX2d;

/// Interleaved (x0, y0, x1, y1, ...) flattening used by the regressors.
Eigen::VectorXd flatten(const Shape& s);
Shape unflatten(const Eigen::VectorXd& v);

/// Largest side of the shape's bounding box, floored away from zero.
double face_size(const Shape& s);

/// Mean point-to-point distance between two shapes of equal layout.
double mean_point_error(const Shape& a, const Shape& b);

/// CSV columns: point_index,x,y.
void write_shape_csv(const std::filesystem::path& path, const Shape& s);
Shape load_shape_csv(const std::filesystem::path& path);

/// Grayscale image with intensities in [0, 1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    float at(int x, int y) const;
    /// Bilinear sample, clamped at the borders.
    double sample(double x, double y) const;
};

/// 8-bit binary PGM. Intensities quantize to 256 levels on write.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage load_pgm(const std::filesystem::path& path);

} // namespace vpe::landmarks

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/landmarks/shape.cpp
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
#include "vpe/landmarks/shape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"

namespace vpe::landmarks {

Eigen::VectorXd flatten(const Shape& s) {
    Eigen::VectorXd v(2 * s.rows());
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        v[2 * i] = s(i, 0);
        v[2 * i + 1] = s(i, 1);
    }
    return v;
}

Shape unflatten(const Eigen::VectorXd& v) {
    if (v.size() % 2 != 0) {
        raise(errc::dimension_mismatch, "flattened shape must have even length");
    }
    Shape s(v.size() / 2, 2);
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        s(i, 0) = v[2 * i];
        s(i, 1) = v[2 * i + 1];
    }
    return s;
}

double face_size(const Shape& s) {
    const double w = s.col(0).maxCoeff() - s.col(0).minCoeff();
    const double h = s.col(1).maxCoeff() - s.col(1).minCoeff();
    return std::max({w, h, 1.0});
}

double mean_point_error(const Shape& a, const Shape& b) {
    if (a.rows() != b.rows()) {
        raise(errc::dimension_mismatch, "shapes have different point counts");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        total += (a.row(i) - b.row(i)).norm();
    }
    return total / static_cast<double>(a.rows());
}

void write_shape_csv(const std::filesystem::path& path, const Shape& s) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "point_index,x,y\n";
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        out << i << ',' << csv::format_double(s(i, 0)) << ',' << csv::format_double(s(i, 1))
            << '\n';
    }
}

Shape load_shape_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path);
    if (rows.empty() || rows.front().size() != 3 || rows.front()[0] != "point_index") {
        raise(errc::bad_format, path.string() + ": expected shape header");
    }
    Shape s(static_cast<Eigen::Index>(rows.size() - 1), 2);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) {
            raise(errc::bad_format, path.string() + ": expected 3 fields per point");
        }
        const long idx = csv::parse_long(rows[i][0], path.string());
        if (idx != static_cast<long>(i - 1)) {
            raise(errc::bad_format, path.string() + ": point indices must be consecutive");
        }
        s(static_cast<Eigen::Index>(i - 1), 0) = csv::parse_double(rows[i][1], path.string());
        s(static_cast<Eigen::Index>(i - 1), 1) = csv::parse_double(rows[i][2], path.string());
    }
    return s;
}

float GrayImage::at(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
}

double GrayImage::sample(double x, double y) const {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = (1.0 - fx) * at(x0, y0) + fx * at(x0 + 1, y0);
    const double bottom = (1.0 - fx) * at(x0, y0 + 1) + fx * at(x0 + 1, y0 + 1);
    return (1.0 - fy) * top + fy * bottom;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    for (const float v : image.pixels) {
        const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
    }
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P5") raise(errc::malformed_header, path.string() + ": expected binary PGM");
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    if (!in || width <= 0 || height <= 0 || maxval != 255) {
        raise(errc::malformed_header, path.string() + ": unsupported PGM header");
    }
    in.get();
    GrayImage image;
    image.width = width;
    image.height = height;
    image.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    std::vector<unsigned char> raw(image.pixels.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        raise(errc::truncated_payload, path.string() + ": truncated pixel data");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        image.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
    }
    return image;
}

} // namespace vpe::landmarks

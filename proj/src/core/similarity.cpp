/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/core/similarity.cpp
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
#include "vpe/core/similarity.hpp"

#include <cmath>

#include "vpe/core/error.hpp"

namespace vpe {

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> gallery_ids,
                                   std::vector<std::string> probe_ids)
    : gallery_ids_(std::move(gallery_ids)),
      probe_ids_(std::move(probe_ids)),
      values_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gallery_ids_.size()),
                                    static_cast<Eigen::Index>(probe_ids_.size()))),
      missing_(gallery_ids_.size() * probe_ids_.size(), 1) {}

void SimilarityMatrix::check_indices(Eigen::Index g, Eigen::Index p) const {
    if (g < 0 || g >= gallery_size() || p < 0 || p >= probe_size()) {
        raise(errc::config, "similarity index out of range");
    }
}

void SimilarityMatrix::set(Eigen::Index g, Eigen::Index p, double score) {
    check_indices(g, p);
    if (!std::isfinite(score)) raise(errc::numeric, "similarity entries must be finite; use set_missing");
    values_(g, p) = score;
    missing_[static_cast<std::size_t>(g) * probe_ids_.size() + static_cast<std::size_t>(p)] = 0;
}

void SimilarityMatrix::set_missing(Eigen::Index g, Eigen::Index p) {
    check_indices(g, p);
    values_(g, p) = 0.0;
    missing_[static_cast<std::size_t>(g) * probe_ids_.size() + static_cast<std::size_t>(p)] = 1;
}

void SimilarityMatrix::mark_gallery_missing(Eigen::Index g) {
    for (Eigen::Index p = 0; p < probe_size(); ++p) set_missing(g, p);
}

void SimilarityMatrix::mark_probe_missing(Eigen::Index p) {
    for (Eigen::Index g = 0; g < gallery_size(); ++g) set_missing(g, p);
}

bool SimilarityMatrix::is_missing(Eigen::Index g, Eigen::Index p) const {
    check_indices(g, p);
    return missing_[static_cast<std::size_t>(g) * probe_ids_.size() + static_cast<std::size_t>(p)] != 0;
}

double SimilarityMatrix::value(Eigen::Index g, Eigen::Index p) const {
    if (is_missing(g, p)) raise(errc::config, "entry is MISSING");
    return values_(g, p);
}

std::optional<double> SimilarityMatrix::entry(Eigen::Index g, Eigen::Index p) const {
    if (is_missing(g, p)) return std::nullopt;
    return values_(g, p);
}

} // namespace vpe

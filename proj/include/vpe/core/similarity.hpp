/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/similarity.hpp
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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vpe {

/**
 * Gallery x probe score table with explicit missing-entry markers.
 *
 * MISSING is a marker, not a float: it ranks below every finite score in
 * all downstream metrics and never appears as a NaN in files. Entries
 * start out MISSING until assigned.
 */
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(std::vector<std::string> gallery_ids, std::vector<std::string> probe_ids);

    Eigen::Index gallery_size() const { return static_cast<Eigen::Index>(gallery_ids_.size()); }
    Eigen::Index probe_size() const { return static_cast<Eigen::Index>(probe_ids_.size()); }

    const std::vector<std::string>& gallery_ids() const { return gallery_ids_; }
    const std::vector<std::string>& probe_ids() const { return probe_ids_; }

    void set(Eigen::Index g, Eigen::Index p, double score);
    void set_missing(Eigen::Index g, Eigen::Index p);
    void mark_gallery_missing(Eigen::Index g);
    void mark_probe_missing(Eigen::Index p);

    bool is_missing(Eigen::Index g, Eigen::Index p) const;

    /// Finite score at (g, p); throws when the entry is MISSING.
    double value(Eigen::Index g, Eigen::Index p) const;

    /// nullopt encodes MISSING.
    std::optional<double> entry(Eigen::Index g, Eigen::Index p) const;

private:
    void check_indices(Eigen::Index g, Eigen::Index p) const;

    std::vector<std::string> gallery_ids_;
    std::vector<std::string> probe_ids_;
    Eigen::MatrixXd values_;
    std::vector<std::uint8_t> missing_;
};

} // namespace vpe

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/types.hpp
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
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vpe {

enum class SourceKind : std::uint8_t { image = 0, video_frame = 1 };

/**
 * One feature vector with its provenance labels. Subject and media
 * identifiers are opaque strings; no structure is assumed beyond equality.
 */
struct Embedding {
    Eigen::VectorXd values;
    std::string subject_id;
    std::string media_id;
    SourceKind source_kind = SourceKind::image;
};

/// A set of embeddings sharing one vector dimension.
struct EmbeddingDataset {
    Eigen::Index dim = 0;
    std::vector<Embedding> items;

    std::size_t size() const { return items.size(); }

    /// Distinct subject ids in first-appearance order.
    std::vector<std::string> subjects() const;
};

/**
 * A named set of embeddings treated as one gallery or probe unit.
 * `members` index into an EmbeddingDataset. A template may instead be
 * flagged `missing` (enrolled but never detected), in which case it has
 * no members and every similarity involving it is reported as MISSING.
 */
struct Template {
    std::string template_id;
    std::string subject_id;
    std::vector<std::size_t> members;
    bool missing = false;
};

/// Learned linear projection; rows = output dimension, cols = input dimension.
using EmbeddingMatrix = Eigen::MatrixXd;

/// Anchor and positive share a subject; the negative does not.
struct Triplet {
    Eigen::VectorXd anchor;
    Eigen::VectorXd positive;
    Eigen::VectorXd negative;
};

enum class TripletObjective { similarity, distance };

struct TrainConfig {
    int output_dim = 128;
    double margin = 0.1;
    double learning_rate = 0.01;
    int negatives_pool = 1000;
    long iterations = 0;
    std::uint64_t seed = 0;

    /// Throws errc::config when a field is out of range.
    void validate() const;
};

} // namespace vpe

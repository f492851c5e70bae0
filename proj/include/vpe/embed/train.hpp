/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/embed/train.hpp
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
#include <optional>
#include <vector>

#include "vpe/core/rng.hpp"
#include "vpe/core/types.hpp"

namespace vpe::embed {

struct TrainLogRow {
    long iteration = 0;
    double loss_ema = 0.0;
    double active_fraction = 0.0;
};

struct TrainResult {
    EmbeddingMatrix matrix;
    std::vector<TrainLogRow> log;
};

/// Smoothing factor for the logged loss trace.
inline constexpr double kLossEmaWeight = 0.02;

/// Random init with entry variance 1/input_dim, reproducible from the seed.
EmbeddingMatrix initial_matrix(int output_dim, Eigen::Index input_dim, std::uint64_t seed);

/**
 * Draws an anchor/positive pair uniformly, then samples `negatives_pool`
 * candidate instances from the whole pool and returns the triplet built
 * from the margin-violating negative with the largest hinge, or nullopt
 * when no sampled candidate violates the margin under (w, margin).
 *
 * The pool must contain at least two subjects and a subject with at
 * least two embeddings.
 */
std::optional<Triplet> sample_hard_triplet(const EmbeddingDataset& pool, const EmbeddingMatrix& w,
                                           double margin, int negatives_pool, Rng& rng,
                                           TripletObjective objective = TripletObjective::similarity);

/// SGD over online-sampled hard triplets with the similarity objective.
TrainResult train_tse(const EmbeddingDataset& pool, const TrainConfig& cfg);

/// Same loop with the distance objective.
TrainResult train_tde(const EmbeddingDataset& pool, const TrainConfig& cfg);

TrainResult train(const EmbeddingDataset& pool, const TrainConfig& cfg, TripletObjective objective);

/// CSV columns: iteration,loss_ema,active_fraction.
void write_train_log(const std::filesystem::path& path, const std::vector<TrainLogRow>& log);

/**
 * Mean hinge loss over `count` triplets sampled uniformly (anchor/positive
 * pair plus one random negative) with the given stream. Used to compare a
 * trained matrix against its initialization on held-out draws.
 */
double mean_triplet_loss(const EmbeddingDataset& pool, const EmbeddingMatrix& w, double margin,
                         int count, Rng& rng, TripletObjective objective);

} // namespace vpe::embed

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/pooling/pooling.hpp
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
#include <vector>

#include "vpe/core/similarity.hpp"
#include "vpe/core/types.hpp"

namespace vpe::pooling {

/**
 * Arithmetic mean of the member vectors followed by L2 normalization.
 * Members are summed in manifest order, so the result is reproducible
 * bit for bit. A missing template propagates as nullopt.
 */
std::optional<Eigen::VectorXd> pool_average(const Template& t, const EmbeddingDataset& dataset);

/**
 * Media-sensitive mean: members are first averaged within each media
 * group (first-appearance order), then the media means are averaged and
 * the result normalized. A template whose media groups are all singletons
 * pools identically to pool_average.
 */
std::optional<Eigen::VectorXd> pool_media_average(const Template& t,
                                                  const EmbeddingDataset& dataset);

enum class PoolingMode { average, media };

std::optional<Eigen::VectorXd> pool(const Template& t, const EmbeddingDataset& dataset,
                                    PoolingMode mode);

/**
 * Entrywise weighted sum of similarity matrices sharing identical
 * gallery/probe id orderings. Weights default to all ones. An output
 * entry is MISSING when the entry is MISSING in any input.
 */
SimilarityMatrix fuse_scores(const std::vector<SimilarityMatrix>& matrices,
                             const std::vector<double>& weights = {});

} // namespace vpe::pooling

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/eval/protocol.hpp
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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vpe/core/similarity.hpp"
#include "vpe/core/types.hpp"
#include "vpe/eval/metrics.hpp"

namespace vpe::eval {

enum class Role { train, gallery, probe };

struct ProtocolEntry {
    int split_index = 0;
    Role role = Role::train;
    std::string template_id;
};

/// CSV columns: split_index,role{train|gallery|probe},template_id.
std::vector<ProtocolEntry> load_protocol(const std::filesystem::path& path);
void write_protocol(const std::filesystem::path& path, const std::vector<ProtocolEntry>& entries);

/// Pooled template vectors keyed by template id; nullopt marks a missing
/// template whose rows or columns become MISSING.
using PooledVectors = std::map<std::string, std::optional<Eigen::VectorXd>>;

/**
 * Gallery x probe cosine matrix of pooled vectors. Missing templates
 * blank out their whole row or column; every referenced template must
 * exist in `pooled`.
 */
SimilarityMatrix build_similarity_matrix(const std::vector<Template>& gallery,
                                         const std::vector<Template>& probe,
                                         const PooledVectors& pooled, int threads = 1);

/// Scores an explicit pair list instead of the full matrix.
std::vector<ScoredPair> score_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::map<std::string, std::string>& subject_of, const PooledVectors& pooled);

/// Verification pairs of every gallery x probe cell of the matrix.
std::vector<ScoredPair> matrix_pairs(const SimilarityMatrix& m,
                                     const std::vector<std::string>& gallery_subjects,
                                     const std::vector<std::string>& probe_subjects);

/**
 * The metric bundle reported per split: TAR at FAR {1e-1, 1e-2, 1e-3},
 * CMC ranks {1, 5, 10} over genuine probes, and TPIR at FPIR {0.01, 0.1}
 * when the probe set contains impostors.
 */
struct SplitEvaluation {
    std::map<std::string, double> metrics;
    std::vector<RocPoint> roc;
    /// Rank accuracies over the genuine probes; empty when none exist.
    std::vector<double> cmc;
};

SplitEvaluation evaluate_split(const SimilarityMatrix& m,
                               const std::vector<std::string>& gallery_subjects,
                               const std::vector<std::string>& probe_subjects);

std::map<std::string, double> split_metrics(const SimilarityMatrix& m,
                                            const std::vector<std::string>& gallery_subjects,
                                            const std::vector<std::string>& probe_subjects);

} // namespace vpe::eval

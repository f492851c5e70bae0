/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/embed/model_selection.cpp
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
#include "vpe/embed/model_selection.hpp"

#include <algorithm>
#include <map>

#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"
#include "vpe/embed/train.hpp"
#include "vpe/embed/vector_ops.hpp"
#include "vpe/eval/metrics.hpp"

namespace vpe::embed {

namespace {

double validation_tar(const EmbeddingDataset& fold, const EmbeddingMatrix& w) {
    std::vector<Eigen::VectorXd> projected;
    projected.reserve(fold.items.size());
    for (const auto& e : fold.items) {
        projected.push_back(l2_normalize(w * e.values));
    }
    std::vector<eval::ScoredPair> pairs;
    for (std::size_t i = 0; i < fold.items.size(); ++i) {
        for (std::size_t j = i + 1; j < fold.items.size(); ++j) {
            pairs.push_back(eval::ScoredPair{
                cosine_similarity(projected[i], projected[j]),
                fold.items[i].subject_id == fold.items[j].subject_id});
        }
    }
    return eval::tar_at_far(eval::roc_curve(pairs), 1e-2);
}

} // namespace

int select_output_dim(const EmbeddingDataset& pool, const std::vector<int>& candidates, int folds,
                      const TrainConfig& base_cfg) {
    if (candidates.empty()) raise(errc::config, "select_output_dim: no candidates");
    if (candidates.size() == 1) return candidates.front();
    if (folds < 2) raise(errc::config, "select_output_dim: needs at least 2 folds");

    std::vector<std::string> subjects = pool.subjects();
    std::sort(subjects.begin(), subjects.end());
    if (subjects.size() < 2 * static_cast<std::size_t>(folds)) {
        raise(errc::config, "select_output_dim: too few subjects for disjoint folds");
    }
    Rng fold_rng(base_cfg.seed);
    fold_rng.shuffle(subjects);
    std::map<std::string, int> fold_of;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
        fold_of[subjects[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
    }

    std::vector<int> ordered = candidates;
    std::sort(ordered.begin(), ordered.end());

    int best_dim = ordered.front();
    double best_score = -1.0;
    for (const int dim : ordered) {
        if (static_cast<Eigen::Index>(dim) > pool.dim) {
            raise(errc::config, "candidate dimension exceeds the input dimension");
        }
        double total = 0.0;
        for (int f = 0; f < folds; ++f) {
            EmbeddingDataset train_split{pool.dim, {}};
            EmbeddingDataset val_split{pool.dim, {}};
            for (const auto& e : pool.items) {
                (fold_of.at(e.subject_id) == f ? val_split : train_split).items.push_back(e);
            }
            TrainConfig cfg = base_cfg;
            cfg.output_dim = dim;
            cfg.seed = base_cfg.seed + 7919u * static_cast<std::uint64_t>(f) +
                       static_cast<std::uint64_t>(dim);
            const TrainResult trained = train_tse(train_split, cfg);
            total += validation_tar(val_split, trained.matrix);
        }
        const double score = total / static_cast<double>(folds);
        // Strict improvement keeps ties at the smaller dimension.
        if (score > best_score) {
            best_score = score;
            best_dim = dim;
        }
    }
    return best_dim;
}

} // namespace vpe::embed

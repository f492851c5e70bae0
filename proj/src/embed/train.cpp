/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/embed/train.cpp
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
#include "vpe/embed/train.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"
#include "vpe/embed/triplet.hpp"

namespace vpe::embed {

namespace {

struct PoolIndex {
    // Anchor candidates are embeddings whose subject has at least one
    // other member to pair with.
    std::vector<std::size_t> anchors;
    std::map<std::string, std::vector<std::size_t>> by_subject;
};

PoolIndex index_pool(const EmbeddingDataset& pool) {
    PoolIndex idx;
    for (std::size_t i = 0; i < pool.items.size(); ++i) {
        idx.by_subject[pool.items[i].subject_id].push_back(i);
    }
    for (std::size_t i = 0; i < pool.items.size(); ++i) {
        if (idx.by_subject.at(pool.items[i].subject_id).size() >= 2) {
            idx.anchors.push_back(i);
        }
    }
    return idx;
}

void check_pool(const EmbeddingDataset& pool, const PoolIndex& idx) {
    if (idx.by_subject.size() < 2) {
        raise(errc::config, "training pool needs at least two subjects");
    }
    if (idx.anchors.empty()) {
        raise(errc::config, "training pool needs a subject with at least two embeddings");
    }
}

void check_unit_norm(const EmbeddingDataset& pool) {
    for (const auto& e : pool.items) {
        if (std::abs(e.values.norm() - 1.0) > 1e-3) {
            raise(errc::config, "training pool vectors must be unit length");
        }
    }
}

} // namespace

EmbeddingMatrix initial_matrix(int output_dim, Eigen::Index input_dim, std::uint64_t seed) {
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
    EmbeddingMatrix w(output_dim, input_dim);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            w(i, j) = scale * rng.normal();
        }
    }
    return w;
}

std::optional<Triplet> sample_hard_triplet(const EmbeddingDataset& pool, const EmbeddingMatrix& w,
                                           double margin, int negatives_pool, Rng& rng,
                                           TripletObjective objective) {
    const PoolIndex idx = index_pool(pool);
    check_pool(pool, idx);

    const std::size_t anchor_i = idx.anchors[rng.uniform_index(idx.anchors.size())];
    const auto& subject = pool.items[anchor_i].subject_id;
    const auto& members = idx.by_subject.at(subject);
    std::size_t positive_i = members[rng.uniform_index(members.size())];
    while (positive_i == anchor_i) {
        positive_i = members[rng.uniform_index(members.size())];
    }

    const Eigen::VectorXd& a = pool.items[anchor_i].values;
    const Eigen::VectorXd& p = pool.items[positive_i].values;

    // One pass over the sampled candidates keeping the hardest violator.
    // Same-subject draws consume a slot but never qualify as negatives.
    double best_loss = 0.0;
    std::size_t best_i = 0;
    bool found = false;
    Triplet probe{a, p, Eigen::VectorXd()};
    for (int k = 0; k < negatives_pool; ++k) {
        const std::size_t candidate = rng.uniform_index(pool.items.size());
        if (pool.items[candidate].subject_id == subject) continue;
        probe.negative = pool.items[candidate].values;
        const double loss = triplet_loss(w, probe, margin, objective);
        if (loss > best_loss) {
            best_loss = loss;
            best_i = candidate;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return Triplet{a, p, pool.items[best_i].values};
}

TrainResult train(const EmbeddingDataset& pool, const TrainConfig& cfg,
                  TripletObjective objective) {
    cfg.validate();
    const PoolIndex idx = index_pool(pool);
    check_pool(pool, idx);
    check_unit_norm(pool);
    if (cfg.output_dim > pool.dim) {
        raise(errc::config, "output_dim exceeds the input dimension");
    }

    TrainResult result;
    result.matrix = initial_matrix(cfg.output_dim, pool.dim, cfg.seed);
    result.log.reserve(static_cast<std::size_t>(cfg.iterations));

    Rng rng(cfg.seed);
    double ema = 0.0;
    long active = 0;
    for (long t = 0; t < cfg.iterations; ++t) {
        const auto triplet =
            sample_hard_triplet(pool, result.matrix, cfg.margin, cfg.negatives_pool, rng, objective);
        double loss = 0.0;
        if (triplet) {
            loss = triplet_loss(result.matrix, *triplet, cfg.margin, objective);
            ++active;
            try {
                result.matrix =
                    sgd_step(result.matrix, *triplet, cfg.learning_rate, cfg.margin, objective);
            } catch (const Error& e) {
                if (!e.is_numeric()) throw;
                std::ostringstream trace;
                trace << e.what() << " at iteration " << t << " (loss ema "
                      << csv::format_double(ema) << ")";
                raise(errc::numeric, trace.str());
            }
        }
        ema = (t == 0) ? loss : (1.0 - kLossEmaWeight) * ema + kLossEmaWeight * loss;
        result.log.push_back(
            TrainLogRow{t, ema, static_cast<double>(active) / static_cast<double>(t + 1)});
    }
    return result;
}

TrainResult train_tse(const EmbeddingDataset& pool, const TrainConfig& cfg) {
    return train(pool, cfg, TripletObjective::similarity);
}

TrainResult train_tde(const EmbeddingDataset& pool, const TrainConfig& cfg) {
    return train(pool, cfg, TripletObjective::distance);
}

void write_train_log(const std::filesystem::path& path, const std::vector<TrainLogRow>& log) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "iteration,loss_ema,active_fraction\n";
    for (const auto& row : log) {
        out << row.iteration << ',' << csv::format_double(row.loss_ema) << ','
            << csv::format_double(row.active_fraction) << '\n';
    }
}

double mean_triplet_loss(const EmbeddingDataset& pool, const EmbeddingMatrix& w, double margin,
                         int count, Rng& rng, TripletObjective objective) {
    const PoolIndex idx = index_pool(pool);
    check_pool(pool, idx);
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
        const std::size_t anchor_i = idx.anchors[rng.uniform_index(idx.anchors.size())];
        const auto& subject = pool.items[anchor_i].subject_id;
        const auto& members = idx.by_subject.at(subject);
        std::size_t positive_i = members[rng.uniform_index(members.size())];
        while (positive_i == anchor_i) {
            positive_i = members[rng.uniform_index(members.size())];
        }
        std::size_t negative_i = rng.uniform_index(pool.items.size());
        while (pool.items[negative_i].subject_id == subject) {
            negative_i = rng.uniform_index(pool.items.size());
        }
        const Triplet t{pool.items[anchor_i].values, pool.items[positive_i].values,
                        pool.items[negative_i].values};
        total += triplet_loss(w, t, margin, objective);
    }
    return total / static_cast<double>(count);
}

} // namespace vpe::embed

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/pooling/pooling.cpp
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
#include "vpe/pooling/pooling.hpp"

#include <string>

#include "vpe/core/error.hpp"
#include "vpe/embed/vector_ops.hpp"

namespace vpe::pooling {

namespace {

const Embedding& member(const Template& t, const EmbeddingDataset& dataset, std::size_t i) {
    const std::size_t idx = t.members[i];
    if (idx >= dataset.items.size()) {
        raise(errc::unknown_id, "template " + t.template_id + " references embedding " +
                                    std::to_string(idx) + " outside the dataset");
    }
    return dataset.items[idx];
}

} // namespace

std::optional<Eigen::VectorXd> pool_average(const Template& t, const EmbeddingDataset& dataset) {
    if (t.missing) return std::nullopt;
    if (t.members.empty()) {
        raise(errc::config, "template " + t.template_id + " has no members and is not missing");
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dataset.dim);
    for (std::size_t i = 0; i < t.members.size(); ++i) {
        sum += member(t, dataset, i).values;
    }
    return embed::l2_normalize(sum / static_cast<double>(t.members.size()));
}

std::optional<Eigen::VectorXd> pool_media_average(const Template& t,
                                                  const EmbeddingDataset& dataset) {
    if (t.missing) return std::nullopt;
    if (t.members.empty()) {
        raise(errc::config, "template " + t.template_id + " has no members and is not missing");
    }
    // Media groups in first-appearance order, members in manifest order,
    // so singleton groups reproduce pool_average exactly.
    std::vector<std::string> media_order;
    std::vector<Eigen::VectorXd> media_sum;
    std::vector<double> media_count;
    for (std::size_t i = 0; i < t.members.size(); ++i) {
        const Embedding& e = member(t, dataset, i);
        std::size_t slot = media_order.size();
        for (std::size_t m = 0; m < media_order.size(); ++m) {
            if (media_order[m] == e.media_id) {
                slot = m;
                break;
            }
        }
        if (slot == media_order.size()) {
            media_order.push_back(e.media_id);
            media_sum.push_back(Eigen::VectorXd::Zero(dataset.dim));
            media_count.push_back(0.0);
        }
        media_sum[slot] += e.values;
        media_count[slot] += 1.0;
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dataset.dim);
    for (std::size_t m = 0; m < media_order.size(); ++m) {
        sum += media_sum[m] / media_count[m];
    }
    return embed::l2_normalize(sum / static_cast<double>(media_order.size()));
}

std::optional<Eigen::VectorXd> pool(const Template& t, const EmbeddingDataset& dataset,
                                    PoolingMode mode) {
    return mode == PoolingMode::average ? pool_average(t, dataset)
                                        : pool_media_average(t, dataset);
}

SimilarityMatrix fuse_scores(const std::vector<SimilarityMatrix>& matrices,
                             const std::vector<double>& weights) {
    if (matrices.empty()) raise(errc::config, "fuse_scores: no matrices");
    const SimilarityMatrix& first = matrices.front();
    for (const auto& m : matrices) {
        if (m.gallery_ids() != first.gallery_ids() || m.probe_ids() != first.probe_ids()) {
            raise(errc::order_mismatch, "fuse_scores: gallery/probe id orderings differ");
        }
    }
    std::vector<double> w = weights;
    if (w.empty()) w.assign(matrices.size(), 1.0);
    if (w.size() != matrices.size()) {
        raise(errc::config, "fuse_scores: weight count differs from matrix count");
    }

    SimilarityMatrix fused(first.gallery_ids(), first.probe_ids());
    for (Eigen::Index g = 0; g < first.gallery_size(); ++g) {
        for (Eigen::Index p = 0; p < first.probe_size(); ++p) {
            double total = 0.0;
            bool missing = false;
            for (std::size_t k = 0; k < matrices.size(); ++k) {
                const auto value = matrices[k].entry(g, p);
                if (!value) {
                    missing = true;
                    break;
                }
                total += w[k] * *value;
            }
            if (!missing) fused.set(g, p, total);
        }
    }
    return fused;
}

} // namespace vpe::pooling

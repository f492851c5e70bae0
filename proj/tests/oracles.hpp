/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tests/oracles.hpp
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

// Brute-force reference implementations kept deliberately naive and
// independent of the library code paths they check.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "vpe/core/similarity.hpp"
#include "vpe/core/types.hpp"
#include "vpe/eval/metrics.hpp"

namespace oracles {

// ---- verification metrics ----

inline double brute_tar_at_far(const std::vector<vpe::eval::ScoredPair>& pairs,
                               double far_target) {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::set<double> thresholds;
    for (const auto& p : pairs) {
        (p.genuine ? positives : negatives)++;
        if (p.score) thresholds.insert(*p.score);
    }
    double best_far = -1.0;
    double best_threshold = 0.0;
    double best_tar = 0.0;
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const double threshold = *it;
        std::size_t ap = 0;
        std::size_t an = 0;
        for (const auto& p : pairs) {
            if (!p.score || *p.score < threshold) continue;
            (p.genuine ? ap : an)++;
        }
        const double far = static_cast<double>(an) / static_cast<double>(negatives);
        const double tar = static_cast<double>(ap) / static_cast<double>(positives);
        if (far > far_target) continue;
        if (far > best_far || (far == best_far && threshold > best_threshold)) {
            best_far = far;
            best_threshold = threshold;
            best_tar = tar;
        }
    }
    return best_far < 0.0 ? 0.0 : best_tar;
}

// Gallery preference order for a probe column: score desc, MISSING last,
// gallery index as the tiebreak.
inline std::vector<Eigen::Index> brute_column_order(const vpe::SimilarityMatrix& m,
                                                    Eigen::Index p) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m.gallery_size()));
    for (Eigen::Index g = 0; g < m.gallery_size(); ++g) order[static_cast<std::size_t>(g)] = g;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const auto va = m.entry(a, p);
        const auto vb = m.entry(b, p);
        if (va.has_value() != vb.has_value()) return va.has_value();
        if (va && *va != *vb) return *va > *vb;
        return a < b;
    });
    return order;
}

inline std::vector<double> brute_cmc(const vpe::SimilarityMatrix& m,
                                     const std::vector<std::string>& gallery_subjects,
                                     const std::vector<std::string>& probe_subjects) {
    std::vector<double> accuracies(static_cast<std::size_t>(m.gallery_size()), 0.0);
    for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
        bool any_finite = false;
        for (Eigen::Index g = 0; g < m.gallery_size(); ++g) {
            if (!m.is_missing(g, p)) any_finite = true;
        }
        if (!any_finite) continue;
        const auto order = brute_column_order(m, p);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            if (gallery_subjects[static_cast<std::size_t>(order[pos])] ==
                probe_subjects[static_cast<std::size_t>(p)]) {
                for (std::size_t k = pos; k < accuracies.size(); ++k) accuracies[k] += 1.0;
                break;
            }
        }
    }
    for (auto& a : accuracies) a /= static_cast<double>(m.probe_size());
    return accuracies;
}

inline std::map<double, double> brute_tpir(const vpe::SimilarityMatrix& m,
                                           const std::vector<std::string>& gallery_subjects,
                                           const std::vector<std::string>& probe_subjects,
                                           const std::vector<double>& targets) {
    struct Top {
        bool genuine = false;
        std::optional<double> score;
        bool mate_first = false;
    };
    std::vector<Top> tops;
    std::size_t genuine = 0;
    std::size_t impostors = 0;
    std::set<double> thresholds;
    for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
        Top t;
        const auto& subject = probe_subjects[static_cast<std::size_t>(p)];
        for (const auto& g : gallery_subjects) {
            if (g == subject) {
                t.genuine = true;
                break;
            }
        }
        const auto order = brute_column_order(m, p);
        t.score = m.entry(order.front(), p);
        t.mate_first = gallery_subjects[static_cast<std::size_t>(order.front())] == subject;
        if (t.score) thresholds.insert(*t.score);
        (t.genuine ? genuine : impostors)++;
        tops.push_back(t);
    }

    std::map<double, double> out;
    for (const double target : targets) {
        double best_fpir = -1.0;
        double best_threshold = 0.0;
        double best_tpir = 0.0;
        for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
            const double threshold = *it;
            std::size_t fa = 0;
            std::size_t ti = 0;
            for (const auto& t : tops) {
                const bool accepted = t.score && *t.score >= threshold;
                if (!t.genuine && accepted) ++fa;
                if (t.genuine && t.mate_first && accepted) ++ti;
            }
            const double fpir = static_cast<double>(fa) / static_cast<double>(impostors);
            const double tpir = static_cast<double>(ti) / static_cast<double>(genuine);
            if (fpir > target) continue;
            if (fpir > best_fpir || (fpir == best_fpir && threshold > best_threshold)) {
                best_fpir = fpir;
                best_threshold = threshold;
                best_tpir = tpir;
            }
        }
        out[target] = best_fpir < 0.0 ? 0.0 : best_tpir;
    }
    return out;
}

// ---- assignment ----

inline double brute_min_assignment_cost(const Eigen::MatrixXd& cost) {
    Eigen::MatrixXd a = cost;
    if (a.rows() > a.cols()) a = cost.transpose();
    std::vector<int> cols(static_cast<std::size_t>(a.cols()));
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
    double best = std::numeric_limits<double>::infinity();
    // Every injective map of rows into columns via column permutations.
    std::sort(cols.begin(), cols.end());
    do {
        double total = 0.0;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            total += a(r, cols[static_cast<std::size_t>(r)]);
        }
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

// ---- gradients ----

// Central differences of a scalar objective in every entry of W.
template <typename Objective>
Eigen::MatrixXd finite_difference_gradient(const Eigen::MatrixXd& w, Objective objective,
                                           double step = 1e-5) {
    Eigen::MatrixXd grad(w.rows(), w.cols());
    Eigen::MatrixXd probe = w;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            probe(i, j) = w(i, j) + step;
            const double up = objective(probe);
            probe(i, j) = w(i, j) - step;
            const double down = objective(probe);
            probe(i, j) = w(i, j);
            grad(i, j) = (up - down) / (2.0 * step);
        }
    }
    return grad;
}

} // namespace oracles

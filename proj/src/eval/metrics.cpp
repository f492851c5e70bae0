/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/eval/metrics.cpp
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
#include "vpe/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"

namespace vpe::eval {

namespace {

// Preference order used everywhere a probe column is ranked: higher score
// first, MISSING after every finite score, ties by gallery index.
bool preferred(const std::optional<double>& a, Eigen::Index ia, const std::optional<double>& b,
               Eigen::Index ib) {
    if (a.has_value() != b.has_value()) return a.has_value();
    if (a.has_value() && *a != *b) return *a > *b;
    return ia < ib;
}

} // namespace

std::vector<RocPoint> roc_curve(const std::vector<ScoredPair>& pairs) {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::vector<double> pos_scores;
    std::vector<double> neg_scores;
    for (const auto& pair : pairs) {
        if (pair.genuine) {
            ++positives;
            if (pair.score) pos_scores.push_back(*pair.score);
        } else {
            ++negatives;
            if (pair.score) neg_scores.push_back(*pair.score);
        }
    }
    if (positives == 0 || negatives == 0) {
        raise(errc::config, "roc_curve needs at least one genuine and one impostor pair");
    }

    std::set<double> threshold_set(pos_scores.begin(), pos_scores.end());
    threshold_set.insert(neg_scores.begin(), neg_scores.end());
    std::vector<double> thresholds(threshold_set.rbegin(), threshold_set.rend());

    std::sort(pos_scores.begin(), pos_scores.end(), std::greater<>());
    std::sort(neg_scores.begin(), neg_scores.end(), std::greater<>());

    std::vector<RocPoint> curve;
    curve.reserve(thresholds.size());
    std::size_t accepted_pos = 0;
    std::size_t accepted_neg = 0;
    for (const double threshold : thresholds) {
        while (accepted_pos < pos_scores.size() && pos_scores[accepted_pos] >= threshold) {
            ++accepted_pos;
        }
        while (accepted_neg < neg_scores.size() && neg_scores[accepted_neg] >= threshold) {
            ++accepted_neg;
        }
        curve.push_back(RocPoint{threshold,
                                 static_cast<double>(accepted_neg) / static_cast<double>(negatives),
                                 static_cast<double>(accepted_pos) / static_cast<double>(positives)});
    }
    return curve;
}

double tar_at_far(const std::vector<RocPoint>& curve, double far_target) {
    const RocPoint* best = nullptr;
    for (const auto& point : curve) {
        if (point.far > far_target) continue;
        if (best == nullptr || point.far > best->far ||
            (point.far == best->far && point.threshold > best->threshold)) {
            best = &point;
        }
    }
    return best ? best->tar : 0.0;
}

std::vector<double> cmc_curve(const SimilarityMatrix& m,
                              const std::vector<std::string>& gallery_subjects,
                              const std::vector<std::string>& probe_subjects) {
    const Eigen::Index gallery = m.gallery_size();
    const Eigen::Index probes = m.probe_size();
    if (static_cast<Eigen::Index>(gallery_subjects.size()) != gallery ||
        static_cast<Eigen::Index>(probe_subjects.size()) != probes) {
        raise(errc::dimension_mismatch, "cmc_curve: subject lists do not match the matrix");
    }
    if (probes == 0 || gallery == 0) {
        raise(errc::config, "cmc_curve: empty matrix");
    }

    std::vector<std::size_t> hits(static_cast<std::size_t>(gallery), 0);
    for (Eigen::Index p = 0; p < probes; ++p) {
        bool has_mate = false;
        bool any_finite = false;
        Eigen::Index best_rank = gallery + 1;
        for (Eigen::Index g = 0; g < gallery; ++g) {
            if (!m.is_missing(g, p)) any_finite = true;
            if (gallery_subjects[static_cast<std::size_t>(g)] !=
                probe_subjects[static_cast<std::size_t>(p)]) {
                continue;
            }
            has_mate = true;
            const auto mate = m.entry(g, p);
            Eigen::Index rank = 1;
            for (Eigen::Index other = 0; other < gallery; ++other) {
                if (other == g) continue;
                if (preferred(m.entry(other, p), other, mate, g)) ++rank;
            }
            best_rank = std::min(best_rank, rank);
        }
        if (!has_mate) {
            raise(errc::config, "cmc_curve: probe subject " +
                                    probe_subjects[static_cast<std::size_t>(p)] +
                                    " is absent from the gallery");
        }
        // A column with no finite entry counts as a miss at every rank.
        if (!any_finite) continue;
        for (Eigen::Index k = best_rank; k <= gallery; ++k) {
            ++hits[static_cast<std::size_t>(k - 1)];
        }
    }

    std::vector<double> accuracies(static_cast<std::size_t>(gallery), 0.0);
    for (std::size_t k = 0; k < accuracies.size(); ++k) {
        accuracies[k] = static_cast<double>(hits[k]) / static_cast<double>(probes);
    }
    return accuracies;
}

std::map<double, double> tpir_at_fpir(const SimilarityMatrix& m,
                                      const std::vector<std::string>& gallery_subjects,
                                      const std::vector<std::string>& probe_subjects,
                                      const std::vector<double>& fpir_targets) {
    const Eigen::Index gallery = m.gallery_size();
    const Eigen::Index probes = m.probe_size();
    if (static_cast<Eigen::Index>(gallery_subjects.size()) != gallery ||
        static_cast<Eigen::Index>(probe_subjects.size()) != probes) {
        raise(errc::dimension_mismatch, "tpir_at_fpir: subject lists do not match the matrix");
    }

    struct ProbeTop {
        bool genuine = false;
        std::optional<double> top;
        bool top_is_mate = false;
    };
    std::vector<ProbeTop> tops;
    std::size_t genuine_count = 0;
    std::size_t impostor_count = 0;
    for (Eigen::Index p = 0; p < probes; ++p) {
        ProbeTop t;
        const auto& subject = probe_subjects[static_cast<std::size_t>(p)];
        t.genuine = std::find(gallery_subjects.begin(), gallery_subjects.end(), subject) !=
                    gallery_subjects.end();
        Eigen::Index best = 0;
        for (Eigen::Index g = 1; g < gallery; ++g) {
            if (preferred(m.entry(g, p), g, m.entry(best, p), best)) best = g;
        }
        if (gallery > 0) {
            t.top = m.entry(best, p);
            t.top_is_mate = gallery_subjects[static_cast<std::size_t>(best)] == subject;
        }
        t.genuine ? ++genuine_count : ++impostor_count;
        tops.push_back(std::move(t));
    }
    if (impostor_count == 0) {
        raise(errc::config, "tpir_at_fpir: no impostor probes, open-set metrics unavailable");
    }
    if (genuine_count == 0) {
        raise(errc::config, "tpir_at_fpir: no genuine probes");
    }

    std::set<double> threshold_set;
    for (const auto& t : tops) {
        if (t.top) threshold_set.insert(*t.top);
    }

    struct Operating {
        double threshold;
        double fpir;
        double tpir;
    };
    std::vector<Operating> sweep;
    for (auto it = threshold_set.rbegin(); it != threshold_set.rend(); ++it) {
        const double threshold = *it;
        std::size_t false_accepts = 0;
        std::size_t true_identifications = 0;
        for (const auto& t : tops) {
            const bool accepted = t.top && *t.top >= threshold;
            if (!t.genuine && accepted) ++false_accepts;
            if (t.genuine && t.top_is_mate && accepted) ++true_identifications;
        }
        sweep.push_back(Operating{
            threshold, static_cast<double>(false_accepts) / static_cast<double>(impostor_count),
            static_cast<double>(true_identifications) / static_cast<double>(genuine_count)});
    }

    std::map<double, double> result;
    for (const double target : fpir_targets) {
        const Operating* best = nullptr;
        for (const auto& op : sweep) {
            if (op.fpir > target) continue;
            if (best == nullptr || op.fpir > best->fpir ||
                (op.fpir == best->fpir && op.threshold > best->threshold)) {
                best = &op;
            }
        }
        result[target] = best ? best->tpir : 0.0;
    }
    return result;
}

std::map<std::string, Aggregate> aggregate_splits(
    const std::vector<std::map<std::string, double>>& splits) {
    if (splits.empty()) raise(errc::config, "aggregate_splits: no splits");
    std::map<std::string, std::vector<double>> series;
    for (const auto& split : splits) {
        for (const auto& [name, value] : split) series[name].push_back(value);
    }
    std::map<std::string, Aggregate> result;
    for (const auto& [name, values] : series) {
        Aggregate agg;
        for (const double v : values) agg.mean += v;
        agg.mean /= static_cast<double>(values.size());
        if (values.size() > 1) {
            double ss = 0.0;
            for (const double v : values) ss += (v - agg.mean) * (v - agg.mean);
            agg.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        result[name] = agg;
    }
    return result;
}

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& curve) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "threshold,far,tar\n";
    for (const auto& p : curve) {
        out << csv::format_double(p.threshold) << ',' << csv::format_double(p.far) << ','
            << csv::format_double(p.tar) << '\n';
    }
}

void write_cmc_csv(const std::filesystem::path& path, const std::vector<double>& accuracies) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "rank,accuracy\n";
    for (std::size_t k = 0; k < accuracies.size(); ++k) {
        out << (k + 1) << ',' << csv::format_double(accuracies[k]) << '\n';
    }
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::map<std::string, Aggregate>& summary) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "metric,mean,std\n";
    for (const auto& [name, agg] : summary) {
        out << name << ',' << csv::format_double(agg.mean) << ','
            << csv::format_double(agg.stddev) << '\n';
    }
}

} // namespace vpe::eval

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/eval/metrics.hpp
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

#include "vpe/core/similarity.hpp"

namespace vpe::eval {

/// One verification pair. nullopt score means MISSING, which is never
/// accepted at any finite threshold.
struct ScoredPair {
    std::optional<double> score;
    bool genuine = false;
};

struct RocPoint {
    double threshold = 0.0;
    double far = 0.0;
    double tar = 0.0;
};

/**
 * Sweeps every distinct finite score as an acceptance threshold
 * (accept when score >= threshold) from high to low and reports
 * (threshold, FAR, TAR) per step. Needs at least one genuine and one
 * impostor pair.
 */
std::vector<RocPoint> roc_curve(const std::vector<ScoredPair>& pairs);

/**
 * TAR at the largest achievable FAR <= far_target. When several
 * thresholds share that FAR the highest threshold wins, so the value is
 * the TAR at the moment the sweep first reaches the operating point,
 * never an optimistic later one. If no point has FAR <= far_target the
 * empty acceptance (TAR 0) is used.
 */
double tar_at_far(const std::vector<RocPoint>& curve, double far_target);

/**
 * Closed-set identification accuracy per rank. Entry k-1 is the fraction
 * of probes whose mated gallery entry is among the top k scores of the
 * probe's column. Ties break by gallery order; MISSING sorts below every
 * finite score; a probe whose column is entirely MISSING fails at every
 * rank. Every probe subject must appear in the gallery.
 */
std::vector<double> cmc_curve(const SimilarityMatrix& m,
                              const std::vector<std::string>& gallery_subjects,
                              const std::vector<std::string>& probe_subjects);

/**
 * Open-set identification: for each target, reports TPIR at the largest
 * achievable FPIR <= target, with the same highest-threshold rule as
 * tar_at_far. FPIR counts impostor probes whose top score passes the
 * threshold; TPIR counts genuine probes whose mate is rank-1 and passes.
 * Probe sets must contain both genuine and impostor probes.
 */
std::map<double, double> tpir_at_fpir(const SimilarityMatrix& m,
                                      const std::vector<std::string>& gallery_subjects,
                                      const std::vector<std::string>& probe_subjects,
                                      const std::vector<double>& fpir_targets);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean and sample standard deviation (n-1 denominator, 0 for a single
/// split) per metric name across splits.
std::map<std::string, Aggregate> aggregate_splits(
    const std::vector<std::map<std::string, double>>& splits);

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& curve);
void write_cmc_csv(const std::filesystem::path& path, const std::vector<double>& accuracies);
void write_summary_csv(const std::filesystem::path& path,
                       const std::map<std::string, Aggregate>& summary);

} // namespace vpe::eval

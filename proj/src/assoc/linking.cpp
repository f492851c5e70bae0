/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/assoc/linking.cpp
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
#include "vpe/assoc/linking.hpp"

#include <vector>

#include "vpe/assoc/hungarian.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"

namespace vpe::assoc {

namespace {

constexpr double kForbidden = 1e9;

// Assigns the given boxes to the given tracklet subset, honoring the gate.
void assign_stage(const std::vector<Tracklet>& tracklets, const std::vector<Detection>& boxes,
                  const std::vector<std::size_t>& box_ids,
                  const std::vector<std::size_t>& tracklet_ids, const AssocConfig& cfg,
                  std::vector<int>& box_to_tracklet) {
    if (box_ids.empty() || tracklet_ids.empty()) return;
    Eigen::MatrixXd cost(static_cast<Eigen::Index>(box_ids.size()),
                         static_cast<Eigen::Index>(tracklet_ids.size()));
    for (std::size_t b = 0; b < box_ids.size(); ++b) {
        for (std::size_t t = 0; t < tracklet_ids.size(); ++t) {
            const Detection& d = boxes[box_ids[b]];
            const Tracklet& tr = tracklets[tracklet_ids[t]];
            const double affinity =
                link_affinity(d.box, d.appearance, tr.latest_box(), tr.appearance, cfg);
            cost(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(t)) =
                affinity < cfg.affinity_gate ? kForbidden : 1.0 - affinity;
        }
    }
    const Assignment assignment = hungarian_assign(cost);
    for (std::size_t b = 0; b < box_ids.size(); ++b) {
        const int col = assignment.row_to_col[b];
        if (col < 0) continue;
        if (cost(static_cast<Eigen::Index>(b), col) >= kForbidden) continue;
        box_to_tracklet[box_ids[b]] = static_cast<int>(tracklet_ids[static_cast<std::size_t>(col)]);
    }
}

} // namespace

double link_affinity(const BoundingBox& detection_box,
                     const std::optional<Eigen::VectorXd>& detection_appearance,
                     const BoundingBox& tracklet_box,
                     const std::optional<Eigen::VectorXd>& tracklet_appearance,
                     const AssocConfig& cfg) {
    const double overlap = overlap_ratio(detection_box, tracklet_box);
    if (!detection_appearance || !tracklet_appearance ||
        detection_appearance->size() != tracklet_appearance->size()) {
        return overlap;
    }
    const double denom = detection_appearance->norm() * tracklet_appearance->norm();
    const double cosine = denom > 0.0 ? detection_appearance->dot(*tracklet_appearance) / denom : 0.0;
    // Negative cosines clamp to zero so the affinity stays in [0, 1].
    return (1.0 - cfg.appearance_weight) * overlap +
           cfg.appearance_weight * std::max(0.0, cosine);
}

LinkingResult link_tracklets(const std::vector<Tracklet>& tracklets,
                             const std::vector<Detection>& boxes, const AssocConfig& cfg) {
    cfg.validate();
    LinkingResult result;
    result.box_to_tracklet.assign(boxes.size(), -1);

    std::vector<std::size_t> high;
    std::vector<std::size_t> low;
    for (std::size_t t = 0; t < tracklets.size(); ++t) {
        if (tracklets[t].state != TrackletState::active) continue;
        (tracklets[t].confidence >= cfg.high_confidence ? high : low).push_back(t);
    }

    std::vector<std::size_t> all_boxes;
    for (std::size_t b = 0; b < boxes.size(); ++b) all_boxes.push_back(b);
    assign_stage(tracklets, boxes, all_boxes, high, cfg, result.box_to_tracklet);

    std::vector<std::size_t> leftover;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (result.box_to_tracklet[b] < 0) leftover.push_back(b);
    }
    assign_stage(tracklets, boxes, leftover, low, cfg, result.box_to_tracklet);

    // Stage two: the confidence each tracklet would carry after this round.
    std::vector<bool> matched(tracklets.size(), false);
    for (const int t : result.box_to_tracklet) {
        if (t >= 0) matched[static_cast<std::size_t>(t)] = true;
    }
    result.updated_confidence.resize(tracklets.size());
    for (std::size_t t = 0; t < tracklets.size(); ++t) {
        const Tracklet& tr = tracklets[t];
        if (tr.state != TrackletState::active) {
            result.updated_confidence[t] = tr.confidence;
            continue;
        }
        const int matches = tr.matched_detections + (matched[t] ? 1 : 0);
        const int misses = matched[t] ? 0 : tr.frames_since_detection + 1;
        result.updated_confidence[t] =
            tracklet_confidence(matches, tr.detection_opportunities + 1, misses,
                                cfg.confidence_decay);
    }
    return result;
}

std::optional<MergeCandidate> best_fragment_link(const Detection& d,
                                                 const std::vector<Tracklet>& tracklets,
                                                 long frame, const AssocConfig& cfg) {
    std::optional<MergeCandidate> best;
    long best_terminated_at = -1;
    for (std::size_t t = 0; t < tracklets.size(); ++t) {
        const Tracklet& tr = tracklets[t];
        if (tr.state != TrackletState::terminated || tr.resumed) continue;
        if (frame - tr.terminated_at > cfg.relink_window) continue;
        const double cost =
            1.0 - link_affinity(d.box, d.appearance, tr.latest_box(), tr.appearance, cfg);
        if (cost >= cfg.merge_cost_max) continue;
        if (!best || cost < best->cost ||
            (cost == best->cost && tr.terminated_at > best_terminated_at)) {
            best = MergeCandidate{t, cost};
            best_terminated_at = tr.terminated_at;
        }
    }
    return best;
}

Eigen::VectorXd appearance_from_ref(const std::string& ref, Eigen::Index dim) {
    // FNV-1a over the key seeds the vector draw.
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char c : ref) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 0x100000001b3ull;
    }
    Rng rng(hash);
    return rng.unit_vector(dim);
}

} // namespace vpe::assoc

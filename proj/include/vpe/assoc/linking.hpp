/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/assoc/linking.hpp
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

#include "vpe/assoc/config.hpp"
#include "vpe/assoc/engine.hpp"
#include "vpe/assoc/geometry.hpp"

namespace vpe::assoc {

/// Blend of box overlap and appearance cosine in [0, 1]; overlap alone
/// when either side lacks an appearance vector.
double link_affinity(const BoundingBox& detection_box,
                     const std::optional<Eigen::VectorXd>& detection_appearance,
                     const BoundingBox& tracklet_box,
                     const std::optional<Eigen::VectorXd>& tracklet_appearance,
                     const AssocConfig& cfg);

/**
 * Two-stage association of one detector round's boxes to tracklets.
 *
 * Stage one assigns boxes to the high-confidence tracklets (local pass)
 * and the leftovers to the low-confidence tracklets (global pass), each
 * by minimum-cost assignment on cost = 1 - affinity with gated pairs
 * forbidden. Stage two reports the confidence every tracklet would carry
 * after this round. Terminated tracklets are never assigned.
 */
struct LinkingResult {
    /// Tracklet index per box, or -1.
    std::vector<int> box_to_tracklet;
    /// Stage-two confidence per tracklet.
    std::vector<double> updated_confidence;
};

LinkingResult link_tracklets(const std::vector<Tracklet>& tracklets,
                             const std::vector<Detection>& boxes, const AssocConfig& cfg);

/**
 * Best re-link candidate for a fresh spawn among recently terminated
 * tracklets: lowest cost below merge_cost_max within the relink window.
 * Ties prefer the most recently terminated, then the lowest index.
 */
struct MergeCandidate {
    std::size_t tracklet_index = 0;
    double cost = 0.0;
};

std::optional<MergeCandidate> best_fragment_link(const Detection& d,
                                                 const std::vector<Tracklet>& tracklets,
                                                 long frame, const AssocConfig& cfg);

/// Deterministic unit vector derived from an opaque reference string.
/// Detection streams that carry appearance_ref keys instead of embedding
/// vectors are resolved through this, so equal keys agree everywhere.
Eigen::VectorXd appearance_from_ref(const std::string& ref, Eigen::Index dim = 16);

} // namespace vpe::assoc

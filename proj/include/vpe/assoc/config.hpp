/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/assoc/config.hpp
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

namespace vpe::assoc {

struct AssocConfig {
    /// Novelty boundary on the overlap ratio: a detection overlapping no
    /// active tracklet by more than this spawns a new one.
    double overlap_threshold = 0.2;

    /// Detector cadence in frames; other frames advance by motion only.
    int detect_every = 5;

    /// Unmatched detector rounds a tracklet survives. One more round
    /// terminates it.
    int termination_frames = 4;

    /// Detections below this confidence are ignored outright.
    double det_confidence_min = -1.0;

    /// Tracklets at or above this confidence get the local association
    /// pass; the rest compete in the global pass.
    double high_confidence = 0.5;

    /// Affinity = (1-w)*overlap + w*appearance_cosine when an appearance
    /// vector is present; overlap alone otherwise.
    double appearance_weight = 0.5;

    /// Pairs with affinity below this are unassignable.
    double affinity_gate = 0.1;

    /// Per missed detector round confidence decay.
    double confidence_decay = 0.9;

    /// A spawned tracklet adopts a terminated identity when the link cost
    /// (1 - affinity) falls below this.
    double merge_cost_max = 0.55;

    /// Terminated tracklets stay linkable for this many frames.
    long relink_window = 50;

    void validate() const;
};

} // namespace vpe::assoc

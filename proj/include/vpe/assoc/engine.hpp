/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/assoc/engine.hpp
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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vpe/assoc/config.hpp"
#include "vpe/assoc/geometry.hpp"

namespace vpe::assoc {

enum class TrackletState { active, terminated };

struct Tracklet {
    std::string id;
    std::vector<std::pair<long, BoundingBox>> boxes;
    double confidence = 1.0;
    int frames_since_detection = 0;
    int matched_detections = 0;
    int detection_opportunities = 0;
    TrackletState state = TrackletState::active;
    long terminated_at = -1;
    /// Set once a later fragment adopts this identity; a terminated
    /// tracklet can be resumed at most once.
    bool resumed = false;
    std::optional<Eigen::VectorXd> appearance;

    // Detector-confirmed boxes; the motion predictor extrapolates from
    // these rather than from its own past predictions.
    std::vector<std::pair<long, BoundingBox>> anchors;

    const BoundingBox& latest_box() const { return boxes.back().second; }
    long latest_frame() const { return boxes.back().first; }
};

/// matched/opportunities damped by the decay per missed detector round.
double tracklet_confidence(int matched, int opportunities, int frames_since_detection,
                           double decay);

enum class EventKind { spawn, refresh, discard, terminate, link };

struct Event {
    long frame = 0;
    EventKind kind = EventKind::spawn;
    std::string tracklet_id;
    std::string detail;
};

const char* event_kind_name(EventKind kind);

/**
 * Per-frame box prediction between detector rounds. The default
 * extrapolates at constant velocity from the last two detector-confirmed
 * boxes (and holds still with fewer). Supplying a custom hook lets
 * externally computed per-frame boxes be replayed instead.
 */
using MotionPredictor = std::function<BoundingBox(const Tracklet&, long frame)>;

BoundingBox constant_velocity_predictor(const Tracklet& t, long frame);

/// True when the detection overlaps no active tracklet's latest box by
/// more than gamma.
bool is_novel(const Detection& d, const std::vector<Tracklet>& tracklets, double gamma);

/**
 * Multi-face association over one detection stream. Frames must be fed in
 * increasing order; detector rounds run on frames where
 * frame % detect_every == 0. One engine per video.
 */
class Engine {
public:
    explicit Engine(AssocConfig cfg, MotionPredictor motion = constant_velocity_predictor);

    void advance_frame(long frame, const std::vector<Detection>& detections);

    const std::vector<Tracklet>& tracklets() const { return tracklets_; }
    const std::vector<Event>& events() const { return events_; }

    /// How each kept detection was consumed: exactly one record per
    /// detection that passed the confidence filter on a detector round.
    struct Consumption {
        long frame = 0;
        std::size_t detection_index = 0;
        std::string tracklet_id;
        EventKind kind = EventKind::refresh;
    };
    const std::vector<Consumption>& consumptions() const { return consumptions_; }

    /// Distinct identities after fragment re-linking.
    std::size_t identity_count() const;

private:
    void detector_round(long frame, const std::vector<Detection>& detections);
    std::string new_identity();

    AssocConfig cfg_;
    MotionPredictor motion_;
    std::vector<Tracklet> tracklets_;
    std::vector<Event> events_;
    std::vector<Consumption> consumptions_;
    long last_frame_ = -1;
    bool started_ = false;
    int next_id_ = 0;
};

/**
 * Identity switches against ground truth: for every true subject, the
 * sequence of identities that consumed its detections is scanned and each
 * change counts as one switch.
 */
int count_identity_switches(const std::vector<Engine::Consumption>& consumptions,
                            const std::map<std::pair<long, std::size_t>, std::string>& truth);

/// One detector output row as read from disk; appearance is still a key,
/// not a vector.
struct DetectionRow {
    long frame = 0;
    BoundingBox box;
    double confidence = 0.0;
    std::string appearance_ref;
};

/// CSV columns: frame,x,y,width,height,confidence[,appearance_ref].
std::vector<DetectionRow> load_detections_csv(const std::filesystem::path& path);

/// CSV columns: tracklet_id,frame,x,y,width,height,state.
void write_tracklets_csv(const std::filesystem::path& path, const std::vector<Tracklet>& tracklets);

/// Lines: frame,kind,tracklet_id[,detail].
void write_event_log(const std::filesystem::path& path, const std::vector<Event>& events);

} // namespace vpe::assoc

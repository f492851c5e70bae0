/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/assoc/engine.cpp
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
#include "vpe/assoc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "vpe/assoc/linking.hpp"
#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"

namespace vpe::assoc {

void AssocConfig::validate() const {
    if (overlap_threshold <= 0.0 || overlap_threshold >= 1.0) {
        raise(errc::config, "overlap_threshold must lie in (0, 1)");
    }
    if (detect_every < 1) raise(errc::config, "detect_every must be positive");
    if (termination_frames < 1) raise(errc::config, "termination_frames must be positive");
    if (confidence_decay <= 0.0 || confidence_decay > 1.0) {
        raise(errc::config, "confidence_decay must lie in (0, 1]");
    }
    if (appearance_weight < 0.0 || appearance_weight > 1.0) {
        raise(errc::config, "appearance_weight must lie in [0, 1]");
    }
    if (affinity_gate < 0.0 || affinity_gate >= 1.0) {
        raise(errc::config, "affinity_gate must lie in [0, 1)");
    }
    if (merge_cost_max <= 0.0) raise(errc::config, "merge_cost_max must be positive");
    if (relink_window < 0) raise(errc::config, "relink_window must be non-negative");
}

double tracklet_confidence(int matched, int opportunities, int frames_since_detection,
                           double decay) {
    if (opportunities <= 0) return 1.0;
    const double ratio = static_cast<double>(matched) / static_cast<double>(opportunities);
    return ratio * std::pow(decay, frames_since_detection);
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::spawn: return "spawn";
        case EventKind::refresh: return "refresh";
        case EventKind::discard: return "discard";
        case EventKind::terminate: return "terminate";
        case EventKind::link: return "link";
    }
    return "?";
}

BoundingBox constant_velocity_predictor(const Tracklet& t, long frame) {
    if (t.anchors.size() < 2) return t.latest_box();
    const auto& [f1, b1] = t.anchors[t.anchors.size() - 2];
    const auto& [f2, b2] = t.anchors.back();
    const double span = static_cast<double>(f2 - f1);
    const double ahead = static_cast<double>(frame - f2);
    BoundingBox out;
    out.x = b2.x + (b2.x - b1.x) / span * ahead;
    out.y = b2.y + (b2.y - b1.y) / span * ahead;
    out.width = std::max(1e-3, b2.width + (b2.width - b1.width) / span * ahead);
    out.height = std::max(1e-3, b2.height + (b2.height - b1.height) / span * ahead);
    return out;
}

bool is_novel(const Detection& d, const std::vector<Tracklet>& tracklets, double gamma) {
    for (const auto& t : tracklets) {
        if (t.state != TrackletState::active) continue;
        if (overlap_ratio(d.box, t.latest_box()) > gamma) return false;
    }
    return true;
}

Engine::Engine(AssocConfig cfg, MotionPredictor motion)
    : cfg_(cfg), motion_(std::move(motion)) {
    cfg_.validate();
}

std::string Engine::new_identity() { return "t" + std::to_string(next_id_++); }

void Engine::advance_frame(long frame, const std::vector<Detection>& detections) {
    if (started_ && frame <= last_frame_) {
        raise(errc::out_of_order, "frames must be presented in increasing order");
    }
    started_ = true;
    last_frame_ = frame;

    for (auto& t : tracklets_) {
        if (t.state != TrackletState::active) continue;
        t.boxes.emplace_back(frame, motion_(t, frame));
    }

    if (frame % cfg_.detect_every == 0) {
        detector_round(frame, detections);
    }
}

void Engine::detector_round(long frame, const std::vector<Detection>& detections) {
    // Indices of detections that pass the confidence filter; original
    // indices are kept so callers can map consumptions back to their rows.
    std::vector<std::size_t> kept;
    std::vector<Detection> boxes;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (detections[i].confidence >= cfg_.det_confidence_min) {
            kept.push_back(i);
            boxes.push_back(detections[i]);
        }
    }

    const std::size_t known = tracklets_.size();
    const LinkingResult linking = link_tracklets(tracklets_, boxes, cfg_);

    std::vector<bool> matched(known, false);
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const int t = linking.box_to_tracklet[b];
        if (t < 0) continue;
        matched[static_cast<std::size_t>(t)] = true;
        Tracklet& tr = tracklets_[static_cast<std::size_t>(t)];
        tr.boxes.back().second = boxes[b].box;
        tr.anchors.emplace_back(frame, boxes[b].box);
        if (boxes[b].appearance) tr.appearance = boxes[b].appearance;
        events_.push_back(Event{frame, EventKind::refresh, tr.id, "d" + std::to_string(kept[b])});
        consumptions_.push_back(Consumption{frame, kept[b], tr.id, EventKind::refresh});
    }

    for (std::size_t b = 0; b < boxes.size(); ++b) {
        if (linking.box_to_tracklet[b] >= 0) continue;
        const Detection& d = boxes[b];
        const std::string detail = "d" + std::to_string(kept[b]);
        if (!is_novel(d, tracklets_, cfg_.overlap_threshold)) {
            // Redundant detection of an already tracked face.
            double best_overlap = -1.0;
            std::string over_id;
            for (const auto& t : tracklets_) {
                if (t.state != TrackletState::active) continue;
                const double o = overlap_ratio(d.box, t.latest_box());
                if (o > best_overlap) {
                    best_overlap = o;
                    over_id = t.id;
                }
            }
            events_.push_back(Event{frame, EventKind::discard, over_id, detail});
            consumptions_.push_back(Consumption{frame, kept[b], over_id, EventKind::discard});
            continue;
        }

        const auto merge = best_fragment_link(d, tracklets_, frame, cfg_);
        Tracklet fresh;
        fresh.boxes.emplace_back(frame, d.box);
        fresh.anchors.emplace_back(frame, d.box);
        fresh.matched_detections = 1;
        fresh.detection_opportunities = 1;
        fresh.frames_since_detection = 0;
        fresh.confidence = tracklet_confidence(1, 1, 0, cfg_.confidence_decay);
        fresh.appearance = d.appearance;
        if (merge) {
            Tracklet& old = tracklets_[merge->tracklet_index];
            old.resumed = true;
            fresh.id = old.id;
            events_.push_back(Event{frame, EventKind::link, fresh.id, detail});
            consumptions_.push_back(Consumption{frame, kept[b], fresh.id, EventKind::link});
        } else {
            fresh.id = new_identity();
            events_.push_back(Event{frame, EventKind::spawn, fresh.id, detail});
            consumptions_.push_back(Consumption{frame, kept[b], fresh.id, EventKind::spawn});
        }
        tracklets_.push_back(std::move(fresh));
    }

    for (std::size_t t = 0; t < known; ++t) {
        Tracklet& tr = tracklets_[t];
        if (tr.state != TrackletState::active) continue;
        ++tr.detection_opportunities;
        if (matched[t]) {
            ++tr.matched_detections;
            tr.frames_since_detection = 0;
        } else {
            ++tr.frames_since_detection;
        }
        tr.confidence = tracklet_confidence(tr.matched_detections, tr.detection_opportunities,
                                            tr.frames_since_detection, cfg_.confidence_decay);
        if (tr.frames_since_detection > cfg_.termination_frames) {
            tr.state = TrackletState::terminated;
            tr.terminated_at = frame;
            events_.push_back(Event{frame, EventKind::terminate, tr.id, ""});
        }
    }
}

std::size_t Engine::identity_count() const {
    std::vector<std::string> ids;
    for (const auto& t : tracklets_) {
        if (std::find(ids.begin(), ids.end(), t.id) == ids.end()) ids.push_back(t.id);
    }
    return ids.size();
}

int count_identity_switches(const std::vector<Engine::Consumption>& consumptions,
                            const std::map<std::pair<long, std::size_t>, std::string>& truth) {
    std::map<std::string, std::string> last_identity;
    int switches = 0;
    for (const auto& c : consumptions) {
        if (c.kind == EventKind::discard) continue;
        const auto it = truth.find({c.frame, c.detection_index});
        if (it == truth.end()) continue;
        const std::string& subject = it->second;
        const auto prev = last_identity.find(subject);
        if (prev != last_identity.end() && prev->second != c.tracklet_id) ++switches;
        last_identity[subject] = c.tracklet_id;
    }
    return switches;
}

std::vector<DetectionRow> load_detections_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path);
    if (rows.empty() || rows.front().size() < 6 || rows.front()[0] != "frame") {
        raise(errc::bad_format, path.string() + ": expected detections header");
    }
    const bool with_appearance = rows.front().size() == 7;
    if (!with_appearance && rows.front().size() != 6) {
        raise(errc::bad_format, path.string() + ": expected 6 or 7 columns");
    }
    std::vector<DetectionRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != rows.front().size()) {
            raise(errc::bad_format, path.string() + ": ragged detections row");
        }
        DetectionRow row;
        row.frame = csv::parse_long(f[0], path.string());
        row.box.x = csv::parse_double(f[1], path.string());
        row.box.y = csv::parse_double(f[2], path.string());
        row.box.width = csv::parse_double(f[3], path.string());
        row.box.height = csv::parse_double(f[4], path.string());
        row.confidence = csv::parse_double(f[5], path.string());
        if (with_appearance) row.appearance_ref = f[6];
        if (!row.box.valid()) {
            raise(errc::bad_format, path.string() + ": detection box must have area");
        }
        if (row.frame < 0) {
            raise(errc::bad_format, path.string() + ": negative frame index");
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_tracklets_csv(const std::filesystem::path& path,
                         const std::vector<Tracklet>& tracklets) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "tracklet_id,frame,x,y,width,height,state\n";
    for (const auto& t : tracklets) {
        for (const auto& [frame, box] : t.boxes) {
            const bool terminated = t.terminated_at >= 0 && frame >= t.terminated_at;
            out << t.id << ',' << frame << ',' << csv::format_double(box.x) << ','
                << csv::format_double(box.y) << ',' << csv::format_double(box.width) << ','
                << csv::format_double(box.height) << ',' << (terminated ? "terminated" : "active")
                << '\n';
        }
    }
}

void write_event_log(const std::filesystem::path& path, const std::vector<Event>& events) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    for (const auto& e : events) {
        out << e.frame << ',' << event_kind_name(e.kind) << ',' << e.tracklet_id;
        if (!e.detail.empty()) out << ',' << e.detail;
        out << '\n';
    }
}

} // namespace vpe::assoc

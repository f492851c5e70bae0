/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/synth/scenario.hpp
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vpe/assoc/geometry.hpp"

namespace vpe::synth {

/*
 * Scenario scripts are declarative text. Statements are separated by
 * newlines or semicolons; '#' starts a comment. Statements:
 *
 *   subject <id>
 *   waypoint <frame> <x> <y> <w> <h>
 *   occlude <from> <to>
 *   dropout <rate>
 *
 * Each subject's box follows its waypoints with linear interpolation;
 * occlusion windows suppress its detections; dropout removes each
 * detection independently with the given probability.
 */

struct Waypoint {
    long frame = 0;
    double x = 0, y = 0, w = 0, h = 0;
};

struct SubjectScript {
    std::string id;
    std::vector<Waypoint> waypoints;
    std::vector<std::pair<long, long>> occlusions;
    double dropout = 0.0;
};

struct ScenarioScript {
    std::vector<SubjectScript> subjects;

    static ScenarioScript parse(const std::string& text);
    static ScenarioScript parse_file(const std::filesystem::path& path);
};

struct ScenarioRow {
    long frame = 0;
    assoc::BoundingBox box;
    double confidence = 1.0;
    std::string subject_id;  // ground truth
};

struct Scenario {
    std::vector<ScenarioRow> rows;
};

/**
 * Expands a script into per-frame detection rows, ordered by frame and
 * then by subject declaration order. Two subjects emitting an identical
 * box on the same frame make the script ambiguous and raise. Confidence
 * noise, when nonzero, perturbs each row's confidence.
 */
Scenario gen_tracking_scenario(const ScenarioScript& script, std::uint64_t seed,
                               double confidence_noise = 0.0);

/// CSV columns: frame,x,y,width,height,confidence[,appearance_ref]. With
/// `appearance_refs` the subject id is written as the appearance key.
void write_detections_csv(const std::filesystem::path& path, const Scenario& scenario,
                          bool appearance_refs);

/// CSV columns: frame,subject_id in the same row order as the detections.
void write_ground_truth_csv(const std::filesystem::path& path, const Scenario& scenario);

} // namespace vpe::synth

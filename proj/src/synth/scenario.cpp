/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/synth/scenario.cpp
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
#include "vpe/synth/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"

namespace vpe::synth {

namespace {

std::vector<std::string> tokenize(const std::string& statement) {
    std::istringstream in(statement);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

assoc::BoundingBox interpolate(const std::vector<Waypoint>& waypoints, long frame) {
    if (frame <= waypoints.front().frame) {
        const auto& w = waypoints.front();
        return {w.x, w.y, w.w, w.h};
    }
    if (frame >= waypoints.back().frame) {
        const auto& w = waypoints.back();
        return {w.x, w.y, w.w, w.h};
    }
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (frame > waypoints[i].frame) continue;
        const auto& a = waypoints[i - 1];
        const auto& b = waypoints[i];
        const double t = static_cast<double>(frame - a.frame) / static_cast<double>(b.frame - a.frame);
        return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.w + t * (b.w - a.w),
                a.h + t * (b.h - a.h)};
    }
    const auto& w = waypoints.back();
    return {w.x, w.y, w.w, w.h};
}

bool occluded(const SubjectScript& s, long frame) {
    for (const auto& [from, to] : s.occlusions) {
        if (frame >= from && frame <= to) return true;
    }
    return false;
}

} // namespace

ScenarioScript ScenarioScript::parse(const std::string& text) {
    ScenarioScript script;
    SubjectScript* current = nullptr;

    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ';', '\n');
    std::istringstream in(normalized);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& kind = tokens.front();
        if (kind == "subject") {
            if (tokens.size() != 2) raise(errc::bad_format, "subject statement needs an id");
            script.subjects.push_back(SubjectScript{tokens[1], {}, {}, 0.0});
            current = &script.subjects.back();
            continue;
        }
        if (current == nullptr) {
            raise(errc::bad_format, "statement '" + kind + "' before any subject");
        }
        if (kind == "waypoint") {
            if (tokens.size() != 6) raise(errc::bad_format, "waypoint needs frame x y w h");
            Waypoint w;
            w.frame = csv::parse_long(tokens[1], "scenario script");
            w.x = csv::parse_double(tokens[2], "scenario script");
            w.y = csv::parse_double(tokens[3], "scenario script");
            w.w = csv::parse_double(tokens[4], "scenario script");
            w.h = csv::parse_double(tokens[5], "scenario script");
            if (w.w <= 0 || w.h <= 0) raise(errc::bad_format, "waypoint box must have area");
            if (!current->waypoints.empty() && w.frame <= current->waypoints.back().frame) {
                raise(errc::bad_format, "waypoints must advance in time");
            }
            current->waypoints.push_back(w);
        } else if (kind == "occlude") {
            if (tokens.size() != 3) raise(errc::bad_format, "occlude needs from and to frames");
            current->occlusions.emplace_back(csv::parse_long(tokens[1], "scenario script"),
                                             csv::parse_long(tokens[2], "scenario script"));
        } else if (kind == "dropout") {
            if (tokens.size() != 2) raise(errc::bad_format, "dropout needs a rate");
            current->dropout = csv::parse_double(tokens[1], "scenario script");
            if (current->dropout < 0.0 || current->dropout >= 1.0) {
                raise(errc::bad_format, "dropout rate must lie in [0, 1)");
            }
        } else {
            raise(errc::bad_format, "unknown scenario statement '" + kind + "'");
        }
    }
    for (const auto& s : script.subjects) {
        if (s.waypoints.empty()) {
            raise(errc::bad_format, "subject " + s.id + " has no waypoints");
        }
    }
    if (script.subjects.empty()) raise(errc::bad_format, "scenario script has no subjects");
    return script;
}

ScenarioScript ScenarioScript::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

Scenario gen_tracking_scenario(const ScenarioScript& script, std::uint64_t seed,
                               double confidence_noise) {
    Scenario scenario;
    long first = script.subjects.front().waypoints.front().frame;
    long last = script.subjects.front().waypoints.back().frame;
    for (const auto& s : script.subjects) {
        first = std::min(first, s.waypoints.front().frame);
        last = std::max(last, s.waypoints.back().frame);
    }

    // One stream per subject so dropout draws do not interleave across
    // subjects; rows are then emitted frame-major in declaration order.
    std::map<std::pair<std::size_t, long>, ScenarioRow> emitted;
    for (std::size_t si = 0; si < script.subjects.size(); ++si) {
        const SubjectScript& s = script.subjects[si];
        Rng rng(seed + si);
        for (long frame = s.waypoints.front().frame; frame <= s.waypoints.back().frame; ++frame) {
            const bool dropped = s.dropout > 0.0 && rng.uniform() < s.dropout;
            const double noise = confidence_noise > 0.0 ? confidence_noise * rng.normal() : 0.0;
            if (occluded(s, frame) || dropped) continue;
            ScenarioRow row;
            row.frame = frame;
            row.box = interpolate(s.waypoints, frame);
            row.confidence = 1.0 + noise;
            row.subject_id = s.id;
            emitted.emplace(std::make_pair(si, frame), std::move(row));
        }
    }
    for (long frame = first; frame <= last; ++frame) {
        for (std::size_t si = 0; si < script.subjects.size(); ++si) {
            const auto it = emitted.find({si, frame});
            if (it != emitted.end()) scenario.rows.push_back(it->second);
        }
    }

    for (std::size_t i = 0; i < scenario.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < scenario.rows.size(); ++j) {
            const auto& a = scenario.rows[i];
            const auto& b = scenario.rows[j];
            if (a.frame != b.frame) break;
            if (a.subject_id != b.subject_id && a.box.x == b.box.x && a.box.y == b.box.y &&
                a.box.width == b.box.width && a.box.height == b.box.height) {
                raise(errc::config, "ambiguous script: subjects " + a.subject_id + " and " +
                                        b.subject_id + " coincide at frame " +
                                        std::to_string(a.frame));
            }
        }
    }
    return scenario;
}

void write_detections_csv(const std::filesystem::path& path, const Scenario& scenario,
                          bool appearance_refs) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << (appearance_refs ? "frame,x,y,width,height,confidence,appearance_ref\n"
                            : "frame,x,y,width,height,confidence\n");
    for (const auto& row : scenario.rows) {
        out << row.frame << ',' << csv::format_double(row.box.x) << ','
            << csv::format_double(row.box.y) << ',' << csv::format_double(row.box.width) << ','
            << csv::format_double(row.box.height) << ',' << csv::format_double(row.confidence);
        if (appearance_refs) out << ',' << row.subject_id;
        out << '\n';
    }
}

void write_ground_truth_csv(const std::filesystem::path& path, const Scenario& scenario) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "frame,subject_id\n";
    for (const auto& row : scenario.rows) {
        out << row.frame << ',' << row.subject_id << '\n';
    }
}

} // namespace vpe::synth

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tests/test_synth.cpp
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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "vpe/core/binary.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/io.hpp"
#include "vpe/embed/vector_ops.hpp"
#include "vpe/synth/clusters.hpp"
#include "vpe/synth/scenario.hpp"

using namespace vpe;
using namespace vpe::synth;
namespace fs = std::filesystem;

TEST_CASE("noise-free clusters collapse each subject to one direction") {
    ClusterSpec spec;
    spec.subjects = 3;
    spec.per_subject = 5;
    spec.ambient_dim = 8;
    spec.intrinsic_dim = 4;
    spec.noise_sigma = 0.0;
    spec.seed = 2;
    const auto data = gen_clusters(spec);
    REQUIRE(data.dataset.items.size() == 15);
    for (int s = 0; s < 3; ++s) {
        for (int k = 1; k < 5; ++k) {
            const auto& a = data.dataset.items[static_cast<std::size_t>(5 * s)].values;
            const auto& b = data.dataset.items[static_cast<std::size_t>(5 * s + k)].values;
            CHECK(embed::cosine_similarity(a, b) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("moderate noise keeps subjects separable") {
    ClusterSpec spec;
    spec.subjects = 8;
    spec.per_subject = 10;
    spec.ambient_dim = 32;
    spec.intrinsic_dim = 8;
    spec.noise_sigma = 0.05;
    spec.seed = 6;
    const auto data = gen_clusters(spec);

    double within = 0.0, between = 0.0;
    int within_n = 0, between_n = 0;
    for (std::size_t i = 0; i < data.dataset.items.size(); ++i) {
        for (std::size_t j = i + 1; j < data.dataset.items.size(); ++j) {
            const double c = embed::cosine_similarity(data.dataset.items[i].values,
                                                      data.dataset.items[j].values);
            if (data.dataset.items[i].subject_id == data.dataset.items[j].subject_id) {
                within += c;
                ++within_n;
            } else {
                between += c;
                ++between_n;
            }
        }
    }
    CHECK(within / within_n > between / between_n);
}

TEST_CASE("generated values are unit length and f32 clean") {
    ClusterSpec spec;
    spec.subjects = 2;
    spec.per_subject = 3;
    spec.ambient_dim = 16;
    spec.intrinsic_dim = 4;
    spec.seed = 12;
    const auto data = gen_clusters(spec);
    for (const auto& e : data.dataset.items) {
        CHECK(std::abs(e.values.norm() - 1.0) < 1e-6);
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            CHECK(e.values[i] == static_cast<double>(static_cast<float>(e.values[i])));
        }
    }
}

TEST_CASE("cluster generation is byte deterministic through the file format") {
    ClusterSpec spec;
    spec.subjects = 4;
    spec.per_subject = 6;
    spec.ambient_dim = 12;
    spec.intrinsic_dim = 3;
    spec.seed = 77;
    const fs::path dir = fs::temp_directory_path() / "vpe_test_synth";
    fs::create_directories(dir);
    const auto a = gen_clusters(spec);
    const auto b = gen_clusters(spec);
    write_embeddings(dir / "a.vpe", a.dataset);
    write_embeddings(dir / "b.vpe", b.dataset);
    CHECK(binio::slurp(dir / "a.vpe") == binio::slurp(dir / "b.vpe"));

    write_template_manifest(dir / "a.csv", a.templates, a.dataset);
    write_template_manifest(dir / "b.csv", b.templates, b.dataset);
    CHECK(binio::slurp(dir / "a.csv") == binio::slurp(dir / "b.csv"));
}

TEST_CASE("templates group by media with one gallery template per subject") {
    ClusterSpec spec;
    spec.subjects = 2;
    spec.per_subject = 6;
    spec.media_per_subject = 3;
    spec.ambient_dim = 8;
    spec.intrinsic_dim = 4;
    spec.seed = 3;
    const auto data = gen_clusters(spec);
    // Per subject: one gallery template and two probe templates.
    REQUIRE(data.templates.size() == 6);
    int galleries = 0;
    for (const auto& t : data.templates) {
        if (t.template_id.rfind("g_", 0) == 0) ++galleries;
        for (const std::size_t m : t.members) {
            CHECK(data.dataset.items[m].subject_id == t.subject_id);
        }
    }
    CHECK(galleries == 2);
}

TEST_CASE("single split protocol separates train and test subjects") {
    ClusterSpec spec;
    spec.subjects = 10;
    spec.per_subject = 4;
    spec.media_per_subject = 2;
    spec.ambient_dim = 8;
    spec.intrinsic_dim = 4;
    spec.seed = 5;
    const auto data = gen_clusters(spec);
    const auto protocol = make_single_split_protocol(data, 0.5, 0.25, 9);

    std::map<std::string, std::string> subject_of;
    for (const auto& t : data.templates) subject_of[t.template_id] = t.subject_id;

    std::set<std::string> train_subjects, test_subjects;
    for (const auto& e : protocol) {
        if (e.role == eval::Role::train) {
            train_subjects.insert(subject_of.at(e.template_id));
        } else {
            test_subjects.insert(subject_of.at(e.template_id));
        }
    }
    for (const auto& s : train_subjects) {
        CHECK(test_subjects.find(s) == test_subjects.end());
    }
}

TEST_CASE("scenario scripts parse and expand") {
    const auto script = ScenarioScript::parse(
        "subject A; waypoint 0 10 10 5 5; waypoint 4 18 10 5 5\n"
        "subject B; waypoint 2 50 50 4 4; waypoint 3 50 50 4 4; dropout 0");
    REQUIRE(script.subjects.size() == 2);
    const auto scenario = gen_tracking_scenario(script, 1);
    // A appears on frames 0..4, B on 2..3.
    REQUIRE(scenario.rows.size() == 7);
    CHECK(scenario.rows[0].subject_id == "A");
    CHECK(scenario.rows[0].box.x == 10.0);
    CHECK(scenario.rows[2].frame == 2);
    // Linear interpolation at frame 2.
    CHECK(scenario.rows[2].box.x == doctest::Approx(14.0));
    CHECK(scenario.rows[3].subject_id == "B");
}

TEST_CASE("occlusion windows silence a subject") {
    const auto script = ScenarioScript::parse(
        "subject A\nwaypoint 0 0 0 5 5\nwaypoint 20 40 0 5 5\nocclude 5 14");
    const auto scenario = gen_tracking_scenario(script, 1);
    for (const auto& row : scenario.rows) {
        CHECK((row.frame < 5 || row.frame > 14));
    }
    CHECK(scenario.rows.size() == 11);
}

TEST_CASE("dropout removes rows deterministically") {
    const auto script = ScenarioScript::parse(
        "subject A\nwaypoint 0 0 0 5 5\nwaypoint 99 99 0 5 5\ndropout 0.4");
    const auto a = gen_tracking_scenario(script, 11);
    const auto b = gen_tracking_scenario(script, 11);
    CHECK(a.rows.size() == b.rows.size());
    CHECK(a.rows.size() < 100);
    CHECK(a.rows.size() > 20);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].frame == b.rows[i].frame);
    }
}

TEST_CASE("identical overlapping trajectories are flagged ambiguous") {
    const auto script = ScenarioScript::parse(
        "subject A; waypoint 0 10 10 5 5; waypoint 4 10 10 5 5\n"
        "subject B; waypoint 2 10 10 5 5; waypoint 6 10 10 5 5");
    CHECK_THROWS_AS(gen_tracking_scenario(script, 1), Error);
}

TEST_CASE("malformed scripts are rejected") {
    CHECK_THROWS_AS(ScenarioScript::parse("waypoint 0 1 2 3 4"), Error);
    CHECK_THROWS_AS(ScenarioScript::parse("subject A\nwaypoint 0 1 2 0 4"), Error);
    CHECK_THROWS_AS(ScenarioScript::parse("subject A\nwobble 1"), Error);
    CHECK_THROWS_AS(ScenarioScript::parse("subject A"), Error);
}

TEST_CASE("detection csv round trips through the writer") {
    const auto script = ScenarioScript::parse(
        "subject A; waypoint 0 10 10 5 5; waypoint 3 16 10 5 5");
    const auto scenario = gen_tracking_scenario(script, 1);
    const fs::path dir = fs::temp_directory_path() / "vpe_test_synth";
    fs::create_directories(dir);
    write_detections_csv(dir / "d.csv", scenario, true);
    write_ground_truth_csv(dir / "gt.csv", scenario);
    const std::string text = binio::slurp(dir / "d.csv");
    CHECK(text.find("appearance_ref") != std::string::npos);
    CHECK(text.find("A") != std::string::npos);
}

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tests/test_eval.cpp
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

#include <cmath>

#include "oracles.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"
#include "vpe/eval/metrics.hpp"
#include "vpe/eval/protocol.hpp"

using namespace vpe;
using namespace vpe::eval;

namespace {

// Random gallery x probe setup with MISSING entries and labeled subjects.
struct RandomCase {
    SimilarityMatrix matrix;
    std::vector<std::string> gallery_subjects;
    std::vector<std::string> probe_subjects;
};

RandomCase random_case(Rng& rng, Eigen::Index max_gallery, Eigen::Index max_probe,
                       bool closed_set) {
    const Eigen::Index gallery = 2 + static_cast<Eigen::Index>(rng.uniform_index(
                                         static_cast<std::size_t>(max_gallery - 1)));
    const Eigen::Index probes = 2 + static_cast<Eigen::Index>(rng.uniform_index(
                                        static_cast<std::size_t>(max_probe - 1)));
    std::vector<std::string> gallery_ids, probe_ids, gallery_subjects, probe_subjects;
    for (Eigen::Index g = 0; g < gallery; ++g) {
        gallery_ids.push_back("g" + std::to_string(g));
        gallery_subjects.push_back("s" + std::to_string(g));
    }
    for (Eigen::Index p = 0; p < probes; ++p) {
        probe_ids.push_back("p" + std::to_string(p));
        if (closed_set) {
            probe_subjects.push_back("s" + std::to_string(rng.uniform_index(
                                              static_cast<std::size_t>(gallery))));
        } else {
            // Roughly a third of the probes are unenrolled impostors.
            if (rng.uniform() < 0.33) {
                probe_subjects.push_back("imp" + std::to_string(p));
            } else {
                probe_subjects.push_back("s" + std::to_string(rng.uniform_index(
                                                  static_cast<std::size_t>(gallery))));
            }
        }
    }
    SimilarityMatrix m(gallery_ids, probe_ids);
    for (Eigen::Index g = 0; g < gallery; ++g) {
        for (Eigen::Index p = 0; p < probes; ++p) {
            if (rng.uniform() < 0.1) continue;  // leave MISSING
            // A coarse grid of scores forces plenty of exact ties.
            m.set(g, p, std::floor(rng.uniform(-1.0, 1.0) * 8.0) / 8.0);
        }
    }
    return RandomCase{std::move(m), std::move(gallery_subjects), std::move(probe_subjects)};
}

std::vector<ScoredPair> four_point_example() {
    return {
        ScoredPair{0.9, true},
        ScoredPair{0.4, true},
        ScoredPair{0.6, false},
        ScoredPair{0.1, false},
    };
}

} // namespace

TEST_CASE("roc hand sweep") {
    const auto curve = roc_curve(four_point_example());
    REQUIRE(curve.size() == 4);
    // Threshold 0.9 accepts one positive and nothing else.
    CHECK(curve[0].far == 0.0);
    CHECK(curve[0].tar == 0.5);
    // Threshold 0.6 lets the first impostor in.
    CHECK(curve[1].far == 0.5);
    CHECK(curve[1].tar == 0.5);
    CHECK(curve[3].far == 1.0);
    CHECK(curve[3].tar == 1.0);

    CHECK(tar_at_far(curve, 0.5) == 0.5);
    CHECK(tar_at_far(curve, 0.0) == 0.5);
    CHECK(tar_at_far(curve, 0.3) == 0.5);
    CHECK(tar_at_far(curve, 1.0) == 1.0);
}

TEST_CASE("roc edge cases") {
    SUBCASE("perfect separation") {
        const std::vector<ScoredPair> pairs = {{0.9, true}, {0.8, true}, {0.2, false}};
        CHECK(tar_at_far(roc_curve(pairs), 0.0) == 1.0);
    }

    SUBCASE("all scores identical collapse to one point") {
        const std::vector<ScoredPair> pairs = {{0.5, true}, {0.5, false}};
        const auto curve = roc_curve(pairs);
        REQUIRE(curve.size() == 1);
        CHECK(curve[0].far == 1.0);
        CHECK(curve[0].tar == 1.0);
    }

    SUBCASE("missing scores are never accepted") {
        const std::vector<ScoredPair> pairs = {
            {0.9, true}, {std::nullopt, true}, {0.2, false}};
        const auto curve = roc_curve(pairs);
        CHECK(tar_at_far(curve, 1.0) == 0.5);
    }

    SUBCASE("one-sided inputs are rejected") {
        CHECK_THROWS_AS(roc_curve({{0.5, true}}), Error);
    }

    SUBCASE("curve is monotone along the sweep") {
        Rng rng(19);
        std::vector<ScoredPair> pairs;
        for (int i = 0; i < 200; ++i) {
            pairs.push_back(ScoredPair{rng.uniform(-1, 1), rng.uniform() < 0.4});
        }
        const auto curve = roc_curve(pairs);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].threshold < curve[i - 1].threshold);
            CHECK(curve[i].far >= curve[i - 1].far);
            CHECK(curve[i].tar >= curve[i - 1].tar);
        }
    }
}

TEST_CASE("cmc hand cases") {
    SUBCASE("identity-like matrix ranks every mate first") {
        SimilarityMatrix m({"g0", "g1"}, {"p0", "p1"});
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(0, 1, 0.0);
        m.set(1, 0, 0.0);
        const auto cmc = cmc_curve(m, {"a", "b"}, {"a", "b"});
        CHECK(cmc[0] == 1.0);
        CHECK(cmc[1] == 1.0);
    }

    SUBCASE("one probe ranks second") {
        // Probe p0: mate scores 0.9 and wins. Probe p1: mate scores 0.1
        // and loses to 0.95.
        SimilarityMatrix m({"g0", "g1"}, {"p0", "p1"});
        m.set(0, 0, 0.9);
        m.set(0, 1, 0.95);
        m.set(1, 0, 0.8);
        m.set(1, 1, 0.1);
        const auto cmc = cmc_curve(m, {"a", "b"}, {"a", "b"});
        CHECK(cmc[0] == 0.5);
        CHECK(cmc[1] == 1.0);
    }

    SUBCASE("all-MISSING probe column fails at every rank") {
        SimilarityMatrix m({"g0", "g1"}, {"p0", "p1"});
        m.set(0, 0, 0.9);
        m.set(1, 0, 0.1);
        const auto cmc = cmc_curve(m, {"a", "b"}, {"a", "b"});
        CHECK(cmc[0] == 0.5);
        CHECK(cmc[1] == 0.5);
    }

    SUBCASE("probe subject absent from the gallery is an error") {
        SimilarityMatrix m({"g0"}, {"p0"});
        m.set(0, 0, 0.5);
        CHECK_THROWS_AS(cmc_curve(m, {"a"}, {"stranger"}), Error);
    }
}

TEST_CASE("tpir hand cases") {
    SUBCASE("separated impostors reduce to rank-1 accuracy") {
        // 200 impostor probes all topping out at 0.2; genuine mates at
        // 0.8+. The largest FPIR step below 0.01 is 2/200.
        std::vector<std::string> gallery_subjects = {"a", "b"};
        std::vector<std::string> gallery_ids = {"g0", "g1"};
        std::vector<std::string> probe_ids, probe_subjects;
        for (int i = 0; i < 4; ++i) {
            probe_ids.push_back("gen" + std::to_string(i));
            probe_subjects.push_back(i % 2 ? "b" : "a");
        }
        for (int i = 0; i < 200; ++i) {
            probe_ids.push_back("imp" + std::to_string(i));
            probe_subjects.push_back("x" + std::to_string(i));
        }
        SimilarityMatrix m(gallery_ids, probe_ids);
        // Three genuine probes rank their mate first; one does not.
        const double mate_scores[4] = {0.9, 0.85, 0.8, 0.3};
        for (int i = 0; i < 4; ++i) {
            const Eigen::Index mate = i % 2;
            m.set(mate, i, mate_scores[i]);
            m.set(1 - mate, i, i == 3 ? 0.5 : 0.25);
        }
        for (int i = 0; i < 200; ++i) {
            m.set(0, 4 + i, 0.1 + 0.0001 * i);
            m.set(1, 4 + i, 0.05);
        }
        const auto tpir = tpir_at_fpir(m, gallery_subjects, probe_subjects, {0.01, 0.1});
        CHECK(tpir.at(0.01) == doctest::Approx(0.75));
        CHECK(tpir.at(0.1) == doctest::Approx(0.75));
    }

    SUBCASE("all probes impostors is an error") {
        SimilarityMatrix m({"g0"}, {"p0"});
        m.set(0, 0, 0.5);
        CHECK_THROWS_AS(tpir_at_fpir(m, {"a"}, {"stranger"}, {0.01}), Error);
    }

    SUBCASE("no impostors is an error") {
        SimilarityMatrix m({"g0"}, {"p0"});
        m.set(0, 0, 0.5);
        CHECK_THROWS_AS(tpir_at_fpir(m, {"a"}, {"a"}, {0.01}), Error);
    }

    SUBCASE("six-probe case matches exhaustive enumeration") {
        SimilarityMatrix m({"g0", "g1"}, {"p0", "p1", "p2", "p3", "p4", "p5"});
        const std::vector<std::string> gallery_subjects = {"a", "b"};
        const std::vector<std::string> probe_subjects = {"a", "b", "a", "x0", "x1", "x2"};
        const double scores[2][6] = {{0.9, 0.4, 0.6, 0.55, 0.2, 0.1},
                                     {0.3, 0.7, 0.65, 0.5, 0.45, 0.05}};
        for (Eigen::Index g = 0; g < 2; ++g) {
            for (Eigen::Index p = 0; p < 6; ++p) m.set(g, p, scores[g][p]);
        }
        const std::vector<double> targets = {0.01, 0.1, 1.0 / 3.0, 0.5, 1.0};
        const auto got = tpir_at_fpir(m, gallery_subjects, probe_subjects, targets);
        const auto want = oracles::brute_tpir(m, gallery_subjects, probe_subjects, targets);
        for (const double t : targets) {
            CHECK(got.at(t) == want.at(t));
        }
    }
}

TEST_CASE("metrics match brute force on random matrices") {
    Rng rng(23);
    for (int trial = 0; trial < 120; ++trial) {
        const bool closed = trial % 2 == 0;
        const RandomCase rc = random_case(rng, 12, 25, closed);

        const auto pairs = matrix_pairs(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
        bool has_pos = false, has_neg = false;
        for (const auto& p : pairs) (p.genuine ? has_pos : has_neg) = true;
        if (has_pos && has_neg) {
            const auto curve = roc_curve(pairs);
            for (const double target : {0.0, 0.001, 0.01, 0.1, 0.37, 1.0}) {
                CHECK(tar_at_far(curve, target) == oracles::brute_tar_at_far(pairs, target));
            }
        }

        if (closed) {
            const auto got = cmc_curve(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
            const auto want = oracles::brute_cmc(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
            REQUIRE(got.size() == want.size());
            for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want[k]);
            // Rank accuracies are monotone in k.
            for (std::size_t k = 1; k < got.size(); ++k) CHECK(got[k] >= got[k - 1]);
        } else {
            bool genuine = false, impostor = false;
            for (const auto& s : rc.probe_subjects) {
                const bool in_gallery =
                    std::find(rc.gallery_subjects.begin(), rc.gallery_subjects.end(), s) !=
                    rc.gallery_subjects.end();
                (in_gallery ? genuine : impostor) = true;
            }
            if (genuine && impostor) {
                const std::vector<double> targets = {0.01, 0.1};
                const auto got =
                    tpir_at_fpir(rc.matrix, rc.gallery_subjects, rc.probe_subjects, targets);
                const auto want =
                    oracles::brute_tpir(rc.matrix, rc.gallery_subjects, rc.probe_subjects, targets);
                CHECK(got.at(0.01) == want.at(0.01));
                CHECK(got.at(0.1) == want.at(0.1));
            }
        }
    }
}

TEST_CASE("metrics are invariant under strictly increasing score transforms") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const RandomCase rc = random_case(rng, 8, 16, true);
        SimilarityMatrix warped(rc.matrix.gallery_ids(), rc.matrix.probe_ids());
        for (Eigen::Index g = 0; g < rc.matrix.gallery_size(); ++g) {
            for (Eigen::Index p = 0; p < rc.matrix.probe_size(); ++p) {
                const auto v = rc.matrix.entry(g, p);
                if (v) warped.set(g, p, std::atan(3.0 * *v) + 0.1 * *v);
            }
        }
        const auto pairs = matrix_pairs(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
        const auto warped_pairs = matrix_pairs(warped, rc.gallery_subjects, rc.probe_subjects);
        bool has_pos = false, has_neg = false;
        for (const auto& p : pairs) (p.genuine ? has_pos : has_neg) = true;
        if (has_pos && has_neg) {
            for (const double target : {0.01, 0.1, 0.5}) {
                CHECK(tar_at_far(roc_curve(pairs), target) ==
                      tar_at_far(roc_curve(warped_pairs), target));
            }
        }
        const auto a = cmc_curve(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
        const auto b = cmc_curve(warped, rc.gallery_subjects, rc.probe_subjects);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
    }
}

TEST_CASE("replacing a finite score with MISSING never helps") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const RandomCase rc = random_case(rng, 6, 10, true);
        // Pick an arbitrary finite entry to blank.
        SimilarityMatrix degraded = rc.matrix;
        bool blanked = false;
        for (Eigen::Index g = 0; g < degraded.gallery_size() && !blanked; ++g) {
            for (Eigen::Index p = 0; p < degraded.probe_size() && !blanked; ++p) {
                if (!degraded.is_missing(g, p)) {
                    degraded.set_missing(g, p);
                    blanked = true;
                }
            }
        }
        REQUIRE(blanked);
        const auto pairs = matrix_pairs(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
        const auto degraded_pairs =
            matrix_pairs(degraded, rc.gallery_subjects, rc.probe_subjects);
        bool has_pos = false, has_neg = false;
        for (const auto& p : pairs) (p.genuine ? has_pos : has_neg) = true;
        if (has_pos && has_neg) {
            for (const double target : {0.01, 0.1, 0.5, 1.0}) {
                CHECK(tar_at_far(roc_curve(degraded_pairs), target) <=
                      tar_at_far(roc_curve(pairs), target));
            }
        }
        const auto before = cmc_curve(rc.matrix, rc.gallery_subjects, rc.probe_subjects);
        const auto after = cmc_curve(degraded, rc.gallery_subjects, rc.probe_subjects);
        for (std::size_t k = 0; k < before.size(); ++k) CHECK(after[k] <= before[k]);
    }
}

TEST_CASE("split aggregation") {
    SUBCASE("single split reports zero deviation") {
        const auto agg = aggregate_splits({{{"m", 0.7}}});
        CHECK(agg.at("m").mean == 0.7);
        CHECK(agg.at("m").stddev == 0.0);
    }

    SUBCASE("two values use the sample deviation") {
        const auto agg = aggregate_splits({{{"m", 0.9}}, {{"m", 0.95}}});
        CHECK(agg.at("m").mean == doctest::Approx(0.925).epsilon(1e-12));
        CHECK(agg.at("m").stddev == doctest::Approx(0.035355339).epsilon(1e-6));
    }

    SUBCASE("constant series has zero deviation") {
        const auto agg = aggregate_splits({{{"m", 0.5}}, {{"m", 0.5}}, {{"m", 0.5}}});
        CHECK(agg.at("m").stddev == 0.0);
    }
}

TEST_CASE("build_similarity_matrix") {
    const std::vector<Template> gallery = {Template{"ga", "a", {0}, false},
                                           Template{"gb", "b", {1}, false}};
    const std::vector<Template> probe = {Template{"pa", "a", {2}, false},
                                         Template{"pm", "b", {}, true}};
    PooledVectors pooled;
    pooled["ga"] = Eigen::Vector2d(1.0, 0.0);
    pooled["gb"] = Eigen::Vector2d(0.0, 1.0);
    pooled["pa"] = Eigen::Vector2d(1.0, 0.0);
    pooled["pm"] = std::nullopt;

    const SimilarityMatrix m = build_similarity_matrix(gallery, probe, pooled);
    CHECK(m.value(0, 0) == 1.0);
    CHECK(m.value(1, 0) == 0.0);
    CHECK(m.is_missing(0, 1));
    CHECK(m.is_missing(1, 1));

    PooledVectors incomplete = pooled;
    incomplete.erase("gb");
    CHECK_THROWS_AS(build_similarity_matrix(gallery, probe, incomplete), Error);

    // Multi-threaded construction matches single-threaded exactly.
    const SimilarityMatrix mt = build_similarity_matrix(gallery, probe, pooled, 4);
    for (Eigen::Index g = 0; g < m.gallery_size(); ++g) {
        for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
            CHECK(mt.entry(g, p) == m.entry(g, p));
        }
    }
}

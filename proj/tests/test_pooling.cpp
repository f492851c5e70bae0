/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tests/test_pooling.cpp
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

#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"
#include "vpe/embed/vector_ops.hpp"
#include "vpe/pooling/pooling.hpp"

using namespace vpe;
using namespace vpe::pooling;

namespace {

EmbeddingDataset make_dataset(const std::vector<std::pair<Eigen::Vector2d, std::string>>& rows) {
    EmbeddingDataset ds;
    ds.dim = 2;
    for (const auto& [v, media] : rows) {
        Embedding e;
        e.values = v;
        e.subject_id = "s";
        e.media_id = media;
        ds.items.push_back(std::move(e));
    }
    return ds;
}

Template whole_dataset_template(const EmbeddingDataset& ds) {
    Template t;
    t.template_id = "t";
    t.subject_id = "s";
    for (std::size_t i = 0; i < ds.items.size(); ++i) t.members.push_back(i);
    return t;
}

} // namespace

TEST_CASE("pool_average worked cases") {
    SUBCASE("single member is returned as-is") {
        const auto ds = make_dataset({{{1.0, 0.0}, "a"}});
        const auto v = pool_average(whole_dataset_template(ds), ds);
        REQUIRE(v.has_value());
        CHECK(*v == Eigen::Vector2d(1.0, 0.0));
    }

    SUBCASE("two orthogonal members average and re-normalize") {
        const auto ds = make_dataset({{{1.0, 0.0}, "a"}, {{0.0, 1.0}, "b"}});
        const auto v = pool_average(whole_dataset_template(ds), ds);
        REQUIRE(v.has_value());
        const double r = std::sqrt(2.0) / 2.0;
        CHECK((*v - Eigen::Vector2d(r, r)).norm() < 1e-12);
    }

    SUBCASE("duplicated members change nothing") {
        const auto ds =
            make_dataset({{{0.6, 0.8}, "a"}, {{0.6, 0.8}, "a"}, {{0.6, 0.8}, "a"}});
        const auto v = pool_average(whole_dataset_template(ds), ds);
        REQUIRE(v.has_value());
        CHECK((*v - Eigen::Vector2d(0.6, 0.8)).norm() < 1e-12);
    }

    SUBCASE("missing template propagates") {
        const auto ds = make_dataset({{{1.0, 0.0}, "a"}});
        Template t;
        t.template_id = "gone";
        t.subject_id = "s";
        t.missing = true;
        CHECK(!pool_average(t, ds).has_value());
        CHECK(!pool_media_average(t, ds).has_value());
    }
}

TEST_CASE("pool_media_average weighs media, not members") {
    // Media a has two members, media b one; the media mean differs from
    // the plain mean over all three members.
    const auto ds = make_dataset({{{1.0, 0.0}, "a"}, {{0.0, 1.0}, "a"}, {{1.0, 0.0}, "b"}});
    const Template t = whole_dataset_template(ds);

    const auto media = pool_media_average(t, ds);
    REQUIRE(media.has_value());
    const Eigen::Vector2d expected_media = Eigen::Vector2d(0.75, 0.25).normalized();
    CHECK((*media - expected_media).norm() < 1e-12);

    const auto plain = pool_average(t, ds);
    REQUIRE(plain.has_value());
    const Eigen::Vector2d expected_plain = Eigen::Vector2d(2.0 / 3.0, 1.0 / 3.0).normalized();
    CHECK((*plain - expected_plain).norm() < 1e-12);
    CHECK((*media - *plain).norm() > 1e-3);
}

TEST_CASE("singleton media groups reproduce pool_average bit-exactly") {
    Rng rng(41);
    EmbeddingDataset ds;
    ds.dim = 6;
    for (int i = 0; i < 9; ++i) {
        Embedding e;
        e.values = rng.unit_vector(6);
        e.subject_id = "s";
        e.media_id = "m" + std::to_string(i);
        ds.items.push_back(std::move(e));
    }
    const Template t = whole_dataset_template(ds);
    const auto a = pool_average(t, ds);
    const auto b = pool_media_average(t, ds);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*a == *b);
}

TEST_CASE("within-media duplication leaves the media pool unchanged") {
    const auto base = make_dataset({{{1.0, 0.0}, "v"}, {{0.0, 1.0}, "w"}});
    const auto dup =
        make_dataset({{{1.0, 0.0}, "v"}, {{1.0, 0.0}, "v"}, {{1.0, 0.0}, "v"}, {{0.0, 1.0}, "w"}});
    const auto a = pool_media_average(whole_dataset_template(base), base);
    const auto b = pool_media_average(whole_dataset_template(dup), dup);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK((*a - *b).norm() < 1e-12);
}

TEST_CASE("pooling is invariant to member order") {
    Rng rng(43);
    EmbeddingDataset ds;
    ds.dim = 5;
    for (int i = 0; i < 8; ++i) {
        Embedding e;
        e.values = rng.unit_vector(5);
        e.subject_id = "s";
        e.media_id = "m" + std::to_string(i % 3);
        ds.items.push_back(std::move(e));
    }
    Template forward = whole_dataset_template(ds);
    Template backward = forward;
    std::reverse(backward.members.begin(), backward.members.end());
    for (const auto mode : {PoolingMode::average, PoolingMode::media}) {
        const auto a = pool(forward, ds, mode);
        const auto b = pool(backward, ds, mode);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK((*a - *b).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("fuse_scores") {
    SimilarityMatrix a({"g0", "g1"}, {"p0", "p1"});
    a.set(0, 0, 0.3);
    a.set(0, 1, 0.2);
    a.set(1, 0, -0.1);
    a.set(1, 1, 0.9);
    SimilarityMatrix b = a;
    b.set(0, 0, 0.4);
    b.set_missing(1, 1);

    SUBCASE("single input is the identity") {
        const SimilarityMatrix fused = fuse_scores({a});
        for (Eigen::Index g = 0; g < 2; ++g) {
            for (Eigen::Index p = 0; p < 2; ++p) {
                CHECK(fused.entry(g, p) == a.entry(g, p));
            }
        }
    }

    SUBCASE("entries add and MISSING absorbs") {
        const SimilarityMatrix fused = fuse_scores({a, b});
        CHECK(fused.value(0, 0) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(fused.value(0, 1) == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(fused.is_missing(1, 1));
    }

    SUBCASE("id order mismatch is rejected") {
        SimilarityMatrix other({"g1", "g0"}, {"p0", "p1"});
        CHECK_THROWS_AS(fuse_scores({a, other}), Error);
    }

    SUBCASE("fusion is monotone in its inputs") {
        SimilarityMatrix lower = b;
        lower.set(0, 0, 0.1);
        const SimilarityMatrix hi = fuse_scores({a, b});
        const SimilarityMatrix lo = fuse_scores({a, lower});
        for (Eigen::Index g = 0; g < 2; ++g) {
            for (Eigen::Index p = 0; p < 2; ++p) {
                if (hi.is_missing(g, p) || lo.is_missing(g, p)) continue;
                CHECK(hi.value(g, p) >= lo.value(g, p));
            }
        }
    }

    SUBCASE("weights scale the contributions") {
        const SimilarityMatrix fused = fuse_scores({a, b}, {2.0, 0.5});
        CHECK(fused.value(0, 0) == doctest::Approx(2.0 * 0.3 + 0.5 * 0.4));
    }
}

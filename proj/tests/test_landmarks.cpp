/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tests/test_landmarks.cpp
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
#include "vpe/core/rng.hpp"
#include "vpe/landmarks/cascade.hpp"
#include "vpe/landmarks/procrustes.hpp"
#include "vpe/synth/shapes.hpp"

using namespace vpe;
using namespace vpe::landmarks;
namespace fs = std::filesystem;

namespace {

Shape random_shape(Rng& rng, Eigen::Index points, double spread) {
    Shape s(points, 2);
    for (Eigen::Index i = 0; i < points; ++i) {
        s(i, 0) = spread * rng.normal();
        s(i, 1) = spread * rng.normal();
    }
    return s;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "vpe_test_landmarks";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("similarity transform recovery") {
    Rng rng(51);
    const Shape src = random_shape(rng, 7, 10.0);

    SUBCASE("identity") {
        const SimilarityTransform t = similarity_transform(src, src);
        CHECK(t.scale == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.rotation == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(t.translation.norm() < 1e-12);
    }

    SUBCASE("pure scaling") {
        const Shape dst = 2.0 * src;
        const SimilarityTransform t = similarity_transform(src, dst);
        CHECK(t.scale == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(t.rotation == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(t.translation.norm() < 1e-9);
    }

    SUBCASE("exactly generated transforms come back within 1e-6") {
        for (int trial = 0; trial < 25; ++trial) {
            SimilarityTransform truth;
            truth.scale = rng.uniform(0.5, 2.0);
            truth.rotation = rng.uniform(-3.0, 3.0);
            truth.translation = Eigen::Vector2d(rng.uniform(-20, 20), rng.uniform(-20, 20));
            const Shape dst = truth.apply(src);
            const SimilarityTransform t = similarity_transform(src, dst);
            CHECK(std::abs(t.scale - truth.scale) < 1e-6);
            CHECK(std::abs(std::remainder(t.rotation - truth.rotation, 2 * 3.14159265358979)) <
                  1e-6);
            CHECK((t.translation - truth.translation).norm() < 1e-6);
        }
    }

    SUBCASE("no random transform beats the closed form on noisy data") {
        SimilarityTransform truth;
        truth.scale = 1.3;
        truth.rotation = 0.7;
        truth.translation = Eigen::Vector2d(4.0, -2.0);
        Shape dst = truth.apply(src);
        for (Eigen::Index i = 0; i < dst.rows(); ++i) {
            dst(i, 0) += 0.3 * rng.normal();
            dst(i, 1) += 0.3 * rng.normal();
        }
        const SimilarityTransform best = similarity_transform(src, dst);
        const double best_residual = alignment_residual(best, src, dst);
        for (int i = 0; i < 1000; ++i) {
            SimilarityTransform probe;
            probe.scale = rng.uniform(0.1, 3.0);
            probe.rotation = rng.uniform(-3.2, 3.2);
            probe.translation = Eigen::Vector2d(rng.uniform(-30, 30), rng.uniform(-30, 30));
            CHECK(alignment_residual(probe, src, dst) >= best_residual);
        }
    }

    SUBCASE("alignment composes with its inverse") {
        SimilarityTransform t;
        t.scale = 0.8;
        t.rotation = -1.2;
        t.translation = Eigen::Vector2d(3.0, 9.0);
        const Shape there = t.apply(src);
        const Shape back = t.inverse().apply(there);
        CHECK((back - src).cwiseAbs().maxCoeff() < 1e-6);
    }

    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(similarity_transform(Shape::Zero(1, 2), Shape::Zero(1, 2)), Error);
        const Shape coincident = Shape::Constant(5, 2, 3.0);
        CHECK_THROWS_AS(similarity_transform(coincident, src.topRows(5)), Error);
    }
}

TEST_CASE("seven point face alignment") {
    Rng rng(53);
    Shape landmarks = random_shape(rng, 68, 30.0);
    Shape canonical(7, 2);
    for (std::size_t i = 0; i < kDefaultAlignmentIndices.size(); ++i) {
        canonical.row(static_cast<Eigen::Index>(i)) =
            landmarks.row(kDefaultAlignmentIndices[i]);
    }

    SUBCASE("already canonical is the identity") {
        const SimilarityTransform t = align_face(landmarks, kDefaultAlignmentIndices, canonical);
        CHECK(t.scale == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(t.rotation) < 1e-9);
        CHECK(t.translation.norm() < 1e-9);
    }

    SUBCASE("shifted canonical recovers the translation") {
        Shape shifted = canonical;
        shifted.col(0).array() += 10.0;
        const SimilarityTransform t = align_face(landmarks, kDefaultAlignmentIndices, shifted);
        CHECK((t.translation - Eigen::Vector2d(10.0, 0.0)).norm() < 1e-9);
        CHECK(t.scale == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("rotated landmarks recover the angle") {
        SimilarityTransform rot;
        rot.rotation = 30.0 * 3.14159265358979323846 / 180.0;
        const Shape rotated = rot.apply(landmarks);
        // Mapping the rotated landmarks back onto the canonical frame
        // must undo the rotation.
        const SimilarityTransform t = align_face(rotated, kDefaultAlignmentIndices, canonical);
        CHECK(std::abs(t.rotation + rot.rotation) < 1e-6);
    }

    SUBCASE("out-of-range indices are rejected") {
        CHECK_THROWS_AS(align_face(random_shape(rng, 20, 1.0), kDefaultAlignmentIndices,
                                   canonical),
                        Error);
    }
}

TEST_CASE("cascade basics") {
    const GrayImage blank{4, 4, std::vector<float>(16, 0.0f)};
    Shape s0(3, 2);
    s0 << 0, 0, 1, 0, 0, 1;

    SUBCASE("zero stages of weights change nothing") {
        CascadeModel model;
        StageRegressor stage;
        stage.patch_scale = 0.4;
        stage.weights = Eigen::MatrixXd::Zero(6, 2);
        model.stages = {stage, stage};
        const auto constant_features = [](const GrayImage&, const Shape&, double) {
            return Eigen::Vector2d(1.0, 0.5);
        };
        CHECK(cascade_predict(blank, s0, model, constant_features) == s0);
    }

    SUBCASE("a constant-offset stage adds the offset") {
        CascadeModel model;
        StageRegressor stage;
        stage.patch_scale = 0.4;
        stage.weights = Eigen::MatrixXd::Zero(6, 1);
        stage.weights.col(0) << 2, 3, 2, 3, 2, 3;  // +2 in x, +3 in y
        model.stages = {stage};
        const auto one = [](const GrayImage&, const Shape&, double) {
            return Eigen::VectorXd::Ones(1).eval();
        };
        const Shape out = cascade_predict(blank, s0, model, one);
        CHECK((out.col(0).array() - s0.col(0).array() - 2.0).abs().maxCoeff() < 1e-12);
        CHECK((out.col(1).array() - s0.col(1).array() - 3.0).abs().maxCoeff() < 1e-12);
    }

    SUBCASE("feature length mismatch raises") {
        CascadeModel model;
        StageRegressor stage;
        stage.patch_scale = 0.4;
        stage.weights = Eigen::MatrixXd::Zero(6, 3);
        model.stages = {stage};
        const auto wrong = [](const GrayImage&, const Shape&, double) {
            return Eigen::Vector2d(1.0, 0.5);
        };
        CHECK_THROWS_AS(cascade_predict(blank, s0, model, wrong), Error);
    }

    SUBCASE("per-stage shape increments telescope") {
        synth::ShapeCorpusSpec spec;
        spec.samples = 10;
        spec.landmarks = 6;
        spec.seed = 7;
        const auto corpus = synth::gen_shape_corpus(spec);
        const auto features = make_pixel_difference_feature(PixelDiffConfig{});
        const auto trained =
            cascade_train(corpus.samples, corpus.mean_shape, 3, features, 1e-3);

        const GrayImage& img = corpus.samples[0].image;
        Shape shape = corpus.mean_shape;
        Shape increment_sum = Shape::Zero(shape.rows(), 2);
        for (const auto& stage : trained.model.stages) {
            CascadeModel one;
            one.stages = {stage};
            const Shape next = cascade_predict(img, shape, one, features);
            increment_sum += next - shape;
            shape = next;
        }
        const Shape full = cascade_predict(img, corpus.mean_shape, trained.model, features);
        CHECK((full - (corpus.mean_shape + increment_sum)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((full - shape).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("cascade training on the synthetic corpus") {
    synth::ShapeCorpusSpec spec;
    spec.samples = 40;
    spec.landmarks = 8;
    spec.seed = 11;
    const auto corpus = synth::gen_shape_corpus(spec);
    const auto features = make_pixel_difference_feature(PixelDiffConfig{});

    SUBCASE("errors are non-increasing and beat the mean shape") {
        const auto trained =
            cascade_train(corpus.samples, corpus.mean_shape, 5, features, 1e-3);
        REQUIRE(trained.stage_errors.size() == 5);
        for (std::size_t t = 1; t < trained.stage_errors.size(); ++t) {
            CHECK(trained.stage_errors[t] <= trained.stage_errors[t - 1] + 1e-9);
        }
        double initial = 0.0;
        for (const auto& s : corpus.samples) {
            initial += mean_point_error(corpus.mean_shape, s.truth);
        }
        initial /= static_cast<double>(corpus.samples.size());
        CHECK(trained.stage_errors.back() < initial);
        CHECK(trained.stage_errors.back() < trained.stage_errors.front());
    }

    SUBCASE("zero residual targets give zero weights") {
        std::vector<TrainingSample> fixed = corpus.samples;
        for (auto& s : fixed) s.truth = corpus.mean_shape;
        const auto trained = cascade_train(fixed, corpus.mean_shape, 5, features, 1e-3);
        for (const auto& stage : trained.model.stages) {
            CHECK(stage.weights.cwiseAbs().maxCoeff() < 1e-6);
        }
        CHECK(trained.stage_errors.back() < 1e-6);
    }

    SUBCASE("weights shrink monotonically with ridge") {
        double previous = std::numeric_limits<double>::infinity();
        for (const double ridge : {1e-3, 1.0, 1e3, 1e6}) {
            const auto trained =
                cascade_train(corpus.samples, corpus.mean_shape, 1, features, ridge);
            const double norm = trained.model.stages[0].weights.norm();
            CHECK(norm <= previous);
            previous = norm;
        }
    }

    SUBCASE("patch scales must shrink") {
        CHECK_THROWS_AS(cascade_train(corpus.samples, corpus.mean_shape, 3, features, 1e-3,
                                      {0.2, 0.3, 0.1}),
                        Error);
    }
}

TEST_CASE("cascade model file round trip") {
    synth::ShapeCorpusSpec spec;
    spec.samples = 8;
    spec.landmarks = 5;
    spec.seed = 13;
    const auto corpus = synth::gen_shape_corpus(spec);
    const auto features = make_pixel_difference_feature(PixelDiffConfig{});
    const auto trained = cascade_train(corpus.samples, corpus.mean_shape, 2, features, 1e-3);

    const fs::path path = temp_dir() / "model.vpl";
    write_cascade_model(path, trained.model);
    const CascadeModel loaded = load_cascade_model(path);
    REQUIRE(loaded.stages.size() == 2);
    for (std::size_t s = 0; s < loaded.stages.size(); ++s) {
        CHECK(loaded.stages[s].patch_scale ==
              doctest::Approx(trained.model.stages[s].patch_scale));
        CHECK((loaded.stages[s].weights - trained.model.stages[s].weights).cwiseAbs().maxCoeff() <
              1e-5);
    }

    const fs::path copy = temp_dir() / "model_copy.vpl";
    write_cascade_model(copy, loaded);
    CHECK(binio::slurp(copy) == binio::slurp(path));
}

TEST_CASE("shape and image files") {
    Rng rng(55);
    const Shape s = random_shape(rng, 9, 12.0);
    const fs::path path = temp_dir() / "shape.csv";
    write_shape_csv(path, s);
    const Shape loaded = load_shape_csv(path);
    CHECK((loaded - s).cwiseAbs().maxCoeff() < 1e-12);

    synth::ShapeCorpusSpec spec;
    spec.samples = 2;
    spec.landmarks = 5;
    spec.seed = 19;
    const auto corpus = synth::gen_shape_corpus(spec);
    const fs::path pgm = temp_dir() / "img.pgm";
    write_pgm(pgm, corpus.samples[0].image);
    const GrayImage img = load_pgm(pgm);
    CHECK(img.width == corpus.samples[0].image.width);
    // 8-bit quantization bounds the round-trip error.
    double max_err = 0.0;
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        max_err = std::max(max_err, std::abs(double(img.pixels[i]) -
                                             double(corpus.samples[0].image.pixels[i])));
    }
    CHECK(max_err <= 0.5 / 255.0 + 1e-9);
}

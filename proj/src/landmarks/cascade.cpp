/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/landmarks/cascade.cpp
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
#include "vpe/landmarks/cascade.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "vpe/core/binary.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"

namespace vpe::landmarks {

FeatureFunction make_pixel_difference_feature(const PixelDiffConfig& cfg) {
    return [cfg](const GrayImage& image, const Shape& shape, double patch_scale) {
        // Probe offsets are replayed from the seed on every call, so the
        // descriptor depends only on (seed, landmark count, pairs).
        Rng rng(cfg.seed);
        const double radius = patch_scale * face_size(shape);
        Eigen::VectorXd features(shape.rows() * cfg.pairs_per_landmark + 1);
        Eigen::Index out = 0;
        for (Eigen::Index l = 0; l < shape.rows(); ++l) {
            for (int k = 0; k < cfg.pairs_per_landmark; ++k) {
                const double ax = rng.uniform(-1.0, 1.0);
                const double ay = rng.uniform(-1.0, 1.0);
                const double bx = rng.uniform(-1.0, 1.0);
                const double by = rng.uniform(-1.0, 1.0);
                const double va =
                    image.sample(shape(l, 0) + ax * radius, shape(l, 1) + ay * radius);
                const double vb =
                    image.sample(shape(l, 0) + bx * radius, shape(l, 1) + by * radius);
                features[out++] = va - vb;
            }
        }
        features[out] = 1.0;  // intercept
        return features;
    };
}

Shape cascade_predict(const GrayImage& image, const Shape& initial, const CascadeModel& model,
                      const FeatureFunction& features) {
    if (model.stages.empty()) {
        raise(errc::config, "cascade_predict: model has no stages");
    }
    Shape shape = initial;
    for (const auto& stage : model.stages) {
        const Eigen::VectorXd f = features(image, shape, stage.patch_scale);
        if (f.size() != stage.weights.cols()) {
            raise(errc::dimension_mismatch,
                  "cascade_predict: feature length differs from regressor columns");
        }
        if (stage.weights.rows() != 2 * shape.rows()) {
            raise(errc::dimension_mismatch,
                  "cascade_predict: regressor rows differ from shape layout");
        }
        shape += unflatten(stage.weights * f);
    }
    return shape;
}

CascadeTraining cascade_train(const std::vector<TrainingSample>& samples, const Shape& mean_shape,
                              int stage_count, const FeatureFunction& features, double ridge,
                              const std::vector<double>& patch_scales) {
    if (samples.size() < 2) {
        raise(errc::config, "cascade_train: needs at least two samples");
    }
    if (stage_count < 1) {
        raise(errc::config, "cascade_train: needs at least one stage");
    }
    if (patch_scales.size() < static_cast<std::size_t>(stage_count)) {
        raise(errc::config, "cascade_train: not enough patch scales for the stage count");
    }
    for (std::size_t i = 1; i < static_cast<std::size_t>(stage_count); ++i) {
        if (patch_scales[i] >= patch_scales[i - 1]) {
            raise(errc::config, "cascade_train: patch scales must strictly decrease");
        }
    }
    const Eigen::Index points = mean_shape.rows();
    for (const auto& s : samples) {
        if (s.truth.rows() != points) {
            raise(errc::dimension_mismatch, "cascade_train: inconsistent landmark counts");
        }
    }

    const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
    std::vector<Shape> current(samples.size(), mean_shape);

    CascadeTraining result;
    for (int stage = 0; stage < stage_count; ++stage) {
        const double patch_scale = patch_scales[static_cast<std::size_t>(stage)];

        Eigen::MatrixXd x;
        Eigen::MatrixXd residuals(n, 2 * points);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd f =
                features(samples[static_cast<std::size_t>(i)].image,
                         current[static_cast<std::size_t>(i)], patch_scale);
            if (x.size() == 0) x.resize(n, f.size());
            if (f.size() != x.cols()) {
                raise(errc::dimension_mismatch, "cascade_train: feature length varies");
            }
            x.row(i) = f.transpose();
            residuals.row(i) =
                (flatten(samples[static_cast<std::size_t>(i)].truth) -
                 flatten(current[static_cast<std::size_t>(i)]))
                    .transpose();
        }

        Eigen::MatrixXd normal = x.transpose() * x;
        normal.diagonal().array() += ridge;
        const Eigen::LDLT<Eigen::MatrixXd> solver(normal);
        const Eigen::MatrixXd solution = solver.solve(x.transpose() * residuals);
        if (solver.info() != Eigen::Success || !solution.allFinite()) {
            raise(errc::numeric,
                  "cascade_train: singular normal equations; set ridge > 0");
        }

        StageRegressor regressor;
        regressor.patch_scale = patch_scale;
        regressor.weights = solution.transpose();
        result.model.stages.push_back(regressor);

        double squared = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Shape& shape = current[static_cast<std::size_t>(i)];
            shape += unflatten(regressor.weights * x.row(i).transpose());
            squared +=
                (shape - samples[static_cast<std::size_t>(i)].truth).rowwise().norm().squaredNorm();
        }
        result.stage_errors.push_back(
            std::sqrt(squared / static_cast<double>(n * points)));
    }
    return result;
}

void write_cascade_model(const std::filesystem::path& path, const CascadeModel& model) {
    std::string out;
    out.append("VPL1");
    binio::put_u32(out, 1);
    binio::put_u32(out, static_cast<std::uint32_t>(model.stages.size()));
    for (const auto& stage : model.stages) {
        binio::put_f32(out, static_cast<float>(stage.patch_scale));
        binio::put_u32(out, static_cast<std::uint32_t>(stage.weights.rows()));
        binio::put_u32(out, static_cast<std::uint32_t>(stage.weights.cols()));
        for (Eigen::Index i = 0; i < stage.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < stage.weights.cols(); ++j) {
                binio::put_f32(out, static_cast<float>(stage.weights(i, j)));
            }
        }
    }
    binio::dump(path, out);
}

CascadeModel load_cascade_model(const std::filesystem::path& path) {
    binio::Reader r(binio::slurp(path), path.string());
    r.expect_magic("VPL1");
    if (r.u32() != 1) {
        raise(errc::malformed_header, path.string() + ": unsupported version");
    }
    const std::uint32_t stages = r.u32();
    CascadeModel model;
    for (std::uint32_t s = 0; s < stages; ++s) {
        StageRegressor stage;
        stage.patch_scale = static_cast<double>(r.f32());
        const std::uint32_t rows = r.u32();
        const std::uint32_t cols = r.u32();
        stage.weights.resize(rows, cols);
        for (std::uint32_t i = 0; i < rows; ++i) {
            for (std::uint32_t j = 0; j < cols; ++j) {
                stage.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    static_cast<double>(r.f32());
            }
        }
        model.stages.push_back(std::move(stage));
    }
    r.require_exhausted();
    return model;
}

} // namespace vpe::landmarks

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/landmarks/cascade.hpp
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
#include <functional>
#include <vector>

#include "vpe/landmarks/shape.hpp"

namespace vpe::landmarks {

/**
 * Local descriptor hook: (image, current shape, patch scale) -> fixed
 * length feature vector. The patch scale is the fraction of the face size
 * in which the descriptor may look around each landmark; it shrinks in
 * later cascade stages.
 */
using FeatureFunction = std::function<Eigen::VectorXd(const GrayImage&, const Shape&, double)>;

/// One cascade stage: a linear map from features to a flattened shape
/// increment, with the patch scale its features were trained at.
struct StageRegressor {
    double patch_scale = 0.0;
    Eigen::MatrixXd weights;  // (2L) x feature_length
};

/// Per-stage patch scales, largest first.
inline const std::vector<double> kDefaultPatchScales = {0.4, 0.3, 0.2, 0.15, 0.1};

struct CascadeModel {
    std::vector<StageRegressor> stages;
};

/// Pixel-difference descriptor config. Offsets are derived from the seed,
/// so training and prediction agree as long as the config matches.
struct PixelDiffConfig {
    int pairs_per_landmark = 8;
    std::uint64_t seed = 17;
};

FeatureFunction make_pixel_difference_feature(const PixelDiffConfig& cfg);

/**
 * Runs the additive cascade: each stage adds weights * features(image,
 * current shape) to the shape, in order, starting from `initial`.
 */
Shape cascade_predict(const GrayImage& image, const Shape& initial, const CascadeModel& model,
                      const FeatureFunction& features);

struct TrainingSample {
    GrayImage image;
    Shape truth;
};

struct CascadeTraining {
    CascadeModel model;
    /// Root mean squared point error after each stage, stage 0 first.
    std::vector<double> stage_errors;
};

/**
 * Fits each stage by ridge regression from the stage features to the
 * remaining shape residuals, then rolls the training shapes forward
 * through the fitted stage. Errors are non-increasing across stages by
 * construction. ridge must be positive unless the normal equations happen
 * to be well conditioned.
 */
CascadeTraining cascade_train(const std::vector<TrainingSample>& samples, const Shape& mean_shape,
                              int stage_count, const FeatureFunction& features, double ridge,
                              const std::vector<double>& patch_scales = kDefaultPatchScales);

/*
 * Model file (magic "VPL1"): magic | version u32 | stage count u32, then
 * per stage: patch_scale f32 | rows u32 | cols u32 | row-major f32 weights.
 */
void write_cascade_model(const std::filesystem::path& path, const CascadeModel& model);
CascadeModel load_cascade_model(const std::filesystem::path& path);

} // namespace vpe::landmarks

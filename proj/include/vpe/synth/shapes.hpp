/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/synth/shapes.hpp
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

#include "vpe/landmarks/cascade.hpp"

namespace vpe::synth {

struct ShapeCorpusSpec {
    int samples = 60;
    int landmarks = 10;
    int image_size = 96;
    /// Similarity perturbation of the base layout per sample.
    double translation_sigma = 5.0;
    double rotation_sigma = 0.08;
    double log_scale_sigma = 0.05;
    /// Rendered blob width in pixels.
    double blob_sigma = 2.5;
    std::uint64_t seed = 3;
};

struct ShapeCorpus {
    std::vector<landmarks::TrainingSample> samples;
    landmarks::Shape mean_shape;
};

/**
 * Regression corpus: a ring-shaped base layout of landmarks, perturbed by
 * a random similarity per sample, rendered as a sum of Gaussian bumps so
 * pixel features carry signal about the true positions. mean_shape is the
 * average of the ground-truth shapes.
 */
ShapeCorpus gen_shape_corpus(const ShapeCorpusSpec& spec);

} // namespace vpe::synth

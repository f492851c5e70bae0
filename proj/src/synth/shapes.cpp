/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/synth/shapes.cpp
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
#include "vpe/synth/shapes.hpp"

#include <cmath>

#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"
#include "vpe/landmarks/procrustes.hpp"

namespace vpe::synth {

namespace {

landmarks::GrayImage render(const landmarks::Shape& shape, int size, double blob_sigma) {
    landmarks::GrayImage image;
    image.width = size;
    image.height = size;
    image.pixels.assign(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0f);
    const double inv = 1.0 / (2.0 * blob_sigma * blob_sigma);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double v = 0.0;
            for (Eigen::Index l = 0; l < shape.rows(); ++l) {
                const double dx = x - shape(l, 0);
                const double dy = y - shape(l, 1);
                v += std::exp(-(dx * dx + dy * dy) * inv);
            }
            image.pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(size) +
                         static_cast<std::size_t>(x)] = static_cast<float>(std::min(1.0, v));
        }
    }
    return image;
}

} // namespace

ShapeCorpus gen_shape_corpus(const ShapeCorpusSpec& spec) {
    if (spec.samples < 2 || spec.landmarks < 3 || spec.image_size < 16) {
        raise(errc::config, "shape corpus spec out of range");
    }
    Rng rng(spec.seed);

    // Base layout: landmarks on a ring around the image center.
    const double center = spec.image_size / 2.0;
    const double radius = spec.image_size * 0.3;
    landmarks::Shape base(spec.landmarks, 2);
    for (int l = 0; l < spec.landmarks; ++l) {
        const double angle = 2.0 * 3.14159265358979323846 * l / spec.landmarks;
        base(l, 0) = center + radius * std::cos(angle);
        base(l, 1) = center + radius * 0.8 * std::sin(angle);
    }

    ShapeCorpus corpus;
    landmarks::Shape sum = landmarks::Shape::Zero(spec.landmarks, 2);
    for (int i = 0; i < spec.samples; ++i) {
        landmarks::SimilarityTransform t;
        t.scale = std::exp(spec.log_scale_sigma * rng.normal());
        t.rotation = spec.rotation_sigma * rng.normal();
        // Perturb around the center rather than the origin.
        const double tx = spec.translation_sigma * rng.normal();
        const double ty = spec.translation_sigma * rng.normal();
        const Eigen::Vector2d pivot(center, center);
        const Eigen::Vector2d moved = t.apply(pivot);
        t.translation = pivot - moved + t.translation + Eigen::Vector2d(tx, ty);

        landmarks::TrainingSample sample;
        sample.truth = t.apply(base);
        sample.image = render(sample.truth, spec.image_size, spec.blob_sigma);
        sum += sample.truth;
        corpus.samples.push_back(std::move(sample));
    }
    corpus.mean_shape = sum / static_cast<double>(spec.samples);
    return corpus;
}

} // namespace vpe::synth

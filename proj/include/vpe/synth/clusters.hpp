/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/synth/clusters.hpp
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
#include <vector>

#include "vpe/core/types.hpp"
#include "vpe/eval/protocol.hpp"

namespace vpe::synth {

struct ClusterSpec {
    int subjects = 20;
    int per_subject = 40;
    Eigen::Index ambient_dim = 64;
    /// Subject mean directions live in the leading subspace of this size.
    Eigen::Index intrinsic_dim = 8;
    double noise_sigma = 0.25;
    int media_per_subject = 4;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ClusterData {
    EmbeddingDataset dataset;
    /// One gallery template per subject (media group 0) plus one probe
    /// template per remaining media group.
    std::vector<Template> templates;
};

/**
 * Labeled unit-norm clusters: per-subject mean directions drawn on the
 * intrinsic-subspace sphere, members perturbed by isotropic ambient noise
 * and re-normalized. Members are dealt round-robin into media groups.
 * Values are quantized to the f32 interchange precision so in-memory and
 * on-disk pipelines agree exactly. Fully determined by (spec, seed).
 */
ClusterData gen_clusters(const ClusterSpec& spec);

/**
 * Variant with deliberately imbalanced media: every subject's first media
 * group is a single video contributing `video_frames` near-duplicate
 * frames (jittered by frame_sigma around one base member); remaining
 * members are singleton images.
 */
ClusterData gen_imbalanced_media(const ClusterSpec& spec, int video_frames, double frame_sigma);

/**
 * One-split protocol over the generated templates: subjects are shuffled,
 * the first train_fraction become training material, the rest are the
 * test set. Every test subject's gallery template enrolls unless it is
 * sampled away by impostor_fraction, which leaves that subject's probes
 * mated to nothing (open set).
 */
std::vector<eval::ProtocolEntry> make_single_split_protocol(const ClusterData& data,
                                                            double train_fraction,
                                                            double impostor_fraction,
                                                            std::uint64_t seed);

} // namespace vpe::synth

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/synth/clusters.cpp
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
#include "vpe/synth/clusters.hpp"

#include <algorithm>

#include "vpe/core/error.hpp"
#include "vpe/core/rng.hpp"
#include "vpe/embed/vector_ops.hpp"

namespace vpe::synth {

namespace {

std::string subject_name(int i) {
    std::string n = std::to_string(i);
    while (n.size() < 3) n.insert(n.begin(), '0');
    return "s" + n;
}

Eigen::VectorXd quantize(const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = static_cast<double>(static_cast<float>(v[i]));
    }
    return out;
}

Eigen::VectorXd subject_mean(const ClusterSpec& spec, Rng& rng) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.ambient_dim);
    mean.head(spec.intrinsic_dim) = rng.unit_vector(spec.intrinsic_dim);
    return mean;
}

Eigen::VectorXd noisy_member(const ClusterSpec& spec, const Eigen::VectorXd& mean, Rng& rng,
                             double sigma) {
    Eigen::VectorXd v = mean;
    if (sigma > 0.0) v += sigma * rng.normal_vector(spec.ambient_dim);
    return quantize(embed::l2_normalize(v));
}

void append_templates(ClusterData& data, const std::string& subject,
                      const std::vector<std::vector<std::size_t>>& media_members,
                      const std::vector<std::string>& media_names) {
    Template gallery;
    gallery.template_id = "g_" + subject;
    gallery.subject_id = subject;
    gallery.members = media_members.front();
    data.templates.push_back(gallery);
    for (std::size_t m = 1; m < media_members.size(); ++m) {
        Template probe;
        probe.template_id = "p_" + subject + "_" + media_names[m];
        probe.subject_id = subject;
        probe.members = media_members[m];
        data.templates.push_back(probe);
    }
}

} // namespace

void ClusterSpec::validate() const {
    if (subjects < 1 || per_subject < 1) raise(errc::config, "cluster spec needs subjects and members");
    if (intrinsic_dim < 1 || intrinsic_dim > ambient_dim) {
        raise(errc::config, "intrinsic_dim must lie in [1, ambient_dim]");
    }
    if (noise_sigma < 0.0) raise(errc::config, "noise_sigma must be non-negative");
    if (media_per_subject < 1) raise(errc::config, "media_per_subject must be positive");
}

ClusterData gen_clusters(const ClusterSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    ClusterData data;
    data.dataset.dim = spec.ambient_dim;

    for (int s = 0; s < spec.subjects; ++s) {
        const std::string subject = subject_name(s);
        const Eigen::VectorXd mean = subject_mean(spec, rng);

        const int media_count = std::min(spec.media_per_subject, spec.per_subject);
        std::vector<std::vector<std::size_t>> media_members(
            static_cast<std::size_t>(media_count));
        std::vector<std::string> media_names;
        std::vector<int> media_sizes(static_cast<std::size_t>(media_count), 0);
        for (int k = 0; k < spec.per_subject; ++k) media_sizes[static_cast<std::size_t>(k % media_count)]++;
        for (int m = 0; m < media_count; ++m) media_names.push_back("m" + std::to_string(m));

        for (int k = 0; k < spec.per_subject; ++k) {
            const int m = k % media_count;
            Embedding e;
            e.values = noisy_member(spec, mean, rng, spec.noise_sigma);
            e.subject_id = subject;
            e.media_id = subject + "/" + media_names[static_cast<std::size_t>(m)];
            e.source_kind = media_sizes[static_cast<std::size_t>(m)] > 1 ? SourceKind::video_frame
                                                                         : SourceKind::image;
            media_members[static_cast<std::size_t>(m)].push_back(data.dataset.items.size());
            data.dataset.items.push_back(std::move(e));
        }
        append_templates(data, subject, media_members, media_names);
    }
    return data;
}

ClusterData gen_imbalanced_media(const ClusterSpec& spec, int video_frames, double frame_sigma) {
    spec.validate();
    if (video_frames < 1) raise(errc::config, "video_frames must be positive");
    Rng rng(spec.seed);
    ClusterData data;
    data.dataset.dim = spec.ambient_dim;

    for (int s = 0; s < spec.subjects; ++s) {
        const std::string subject = subject_name(s);
        const Eigen::VectorXd mean = subject_mean(spec, rng);

        std::vector<std::vector<std::size_t>> media_members;
        std::vector<std::string> media_names;

        // Media 0: one video of near-duplicate frames around a single
        // base appearance drawn off the subject mean.
        const Eigen::VectorXd base = noisy_member(spec, mean, rng, spec.noise_sigma);
        media_members.emplace_back();
        media_names.push_back("v0");
        for (int f = 0; f < video_frames; ++f) {
            Embedding e;
            e.values = noisy_member(spec, base, rng, frame_sigma);
            e.subject_id = subject;
            e.media_id = subject + "/v0";
            e.source_kind = SourceKind::video_frame;
            media_members.front().push_back(data.dataset.items.size());
            data.dataset.items.push_back(std::move(e));
        }

        for (int k = 0; k < spec.per_subject; ++k) {
            Embedding e;
            e.values = noisy_member(spec, mean, rng, spec.noise_sigma);
            e.subject_id = subject;
            e.media_id = subject + "/i" + std::to_string(k);
            e.source_kind = SourceKind::image;
            media_members.push_back({data.dataset.items.size()});
            media_names.push_back("i" + std::to_string(k));
            data.dataset.items.push_back(std::move(e));
        }
        append_templates(data, subject, media_members, media_names);
    }
    return data;
}

std::vector<eval::ProtocolEntry> make_single_split_protocol(const ClusterData& data,
                                                            double train_fraction,
                                                            double impostor_fraction,
                                                            std::uint64_t seed) {
    if (train_fraction < 0.0 || train_fraction >= 1.0) {
        raise(errc::config, "train_fraction must lie in [0, 1)");
    }
    if (impostor_fraction < 0.0 || impostor_fraction >= 1.0) {
        raise(errc::config, "impostor_fraction must lie in [0, 1)");
    }
    std::vector<std::string> subjects = data.dataset.subjects();
    Rng rng(seed);
    rng.shuffle(subjects);
    const std::size_t train_count =
        static_cast<std::size_t>(train_fraction * static_cast<double>(subjects.size()));
    std::vector<std::string> train(subjects.begin(), subjects.begin() + train_count);
    std::vector<std::string> test(subjects.begin() + train_count, subjects.end());
    if (test.size() < 2) raise(errc::config, "too few test subjects for a split");

    const std::size_t impostors =
        static_cast<std::size_t>(impostor_fraction * static_cast<double>(test.size()));
    std::vector<std::string> unenrolled(test.begin(), test.begin() + impostors);

    const auto is_train = [&](const std::string& s) {
        return std::find(train.begin(), train.end(), s) != train.end();
    };
    const auto is_unenrolled = [&](const std::string& s) {
        return std::find(unenrolled.begin(), unenrolled.end(), s) != unenrolled.end();
    };

    std::vector<eval::ProtocolEntry> entries;
    for (const auto& t : data.templates) {
        if (is_train(t.subject_id)) {
            entries.push_back(eval::ProtocolEntry{0, eval::Role::train, t.template_id});
        } else if (t.template_id.rfind("g_", 0) == 0) {
            if (!is_unenrolled(t.subject_id)) {
                entries.push_back(eval::ProtocolEntry{0, eval::Role::gallery, t.template_id});
            }
        } else {
            entries.push_back(eval::ProtocolEntry{0, eval::Role::probe, t.template_id});
        }
    }
    return entries;
}

} // namespace vpe::synth

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/eval/protocol.cpp
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
#include "vpe/eval/protocol.hpp"

#include <algorithm>
#include <fstream>

#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/parallel.hpp"
#include "vpe/embed/vector_ops.hpp"

namespace vpe::eval {

namespace {

Role parse_role(const std::string& s, const std::string& context) {
    if (s == "train") return Role::train;
    if (s == "gallery") return Role::gallery;
    if (s == "probe") return Role::probe;
    raise(errc::bad_format, "unknown role '" + s + "' in " + context);
}

const char* role_name(Role r) {
    switch (r) {
        case Role::train: return "train";
        case Role::gallery: return "gallery";
        case Role::probe: return "probe";
    }
    return "?";
}

const std::optional<Eigen::VectorXd>& pooled_or_throw(const PooledVectors& pooled,
                                                      const std::string& id) {
    const auto it = pooled.find(id);
    if (it == pooled.end()) {
        raise(errc::unknown_id, "no pooled vector for template " + id);
    }
    return it->second;
}

} // namespace

std::vector<ProtocolEntry> load_protocol(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path);
    if (rows.empty() || rows.front().size() != 3 || rows.front()[0] != "split_index") {
        raise(errc::bad_format, path.string() + ": expected protocol manifest header");
    }
    std::vector<ProtocolEntry> entries;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) {
            raise(errc::bad_format, path.string() + ": expected 3 fields per protocol row");
        }
        entries.push_back(ProtocolEntry{static_cast<int>(csv::parse_long(rows[i][0], path.string())),
                                        parse_role(rows[i][1], path.string()), rows[i][2]});
    }
    return entries;
}

void write_protocol(const std::filesystem::path& path, const std::vector<ProtocolEntry>& entries) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "split_index,role,template_id\n";
    for (const auto& e : entries) {
        out << e.split_index << ',' << role_name(e.role) << ',' << e.template_id << '\n';
    }
}

SimilarityMatrix build_similarity_matrix(const std::vector<Template>& gallery,
                                         const std::vector<Template>& probe,
                                         const PooledVectors& pooled, int threads) {
    std::vector<std::string> gallery_ids;
    std::vector<std::string> probe_ids;
    gallery_ids.reserve(gallery.size());
    probe_ids.reserve(probe.size());
    for (const auto& t : gallery) gallery_ids.push_back(t.template_id);
    for (const auto& t : probe) probe_ids.push_back(t.template_id);
    SimilarityMatrix m(std::move(gallery_ids), std::move(probe_ids));

    std::vector<const Eigen::VectorXd*> gallery_vectors(gallery.size(), nullptr);
    std::vector<const Eigen::VectorXd*> probe_vectors(probe.size(), nullptr);
    for (std::size_t g = 0; g < gallery.size(); ++g) {
        const auto& v = pooled_or_throw(pooled, gallery[g].template_id);
        gallery_vectors[g] = v ? &*v : nullptr;
    }
    for (std::size_t p = 0; p < probe.size(); ++p) {
        const auto& v = pooled_or_throw(pooled, probe[p].template_id);
        probe_vectors[p] = v ? &*v : nullptr;
    }

    parallel_for(0, static_cast<std::int64_t>(gallery.size()), threads, [&](std::int64_t g) {
        if (gallery_vectors[static_cast<std::size_t>(g)] == nullptr) return;
        for (std::size_t p = 0; p < probe.size(); ++p) {
            if (probe_vectors[p] == nullptr) continue;
            m.set(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(p),
                  embed::cosine_similarity(*gallery_vectors[static_cast<std::size_t>(g)],
                                           *probe_vectors[p]));
        }
    });
    return m;
}

std::vector<ScoredPair> score_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::map<std::string, std::string>& subject_of, const PooledVectors& pooled) {
    std::vector<ScoredPair> scored;
    scored.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        const auto sa = subject_of.find(a);
        const auto sb = subject_of.find(b);
        if (sa == subject_of.end() || sb == subject_of.end()) {
            raise(errc::unknown_id, "pair references unknown template " +
                                        (sa == subject_of.end() ? a : b));
        }
        const auto& va = pooled_or_throw(pooled, a);
        const auto& vb = pooled_or_throw(pooled, b);
        ScoredPair pair;
        pair.genuine = sa->second == sb->second;
        if (va && vb) pair.score = embed::cosine_similarity(*va, *vb);
        scored.push_back(std::move(pair));
    }
    return scored;
}

std::vector<ScoredPair> matrix_pairs(const SimilarityMatrix& m,
                                     const std::vector<std::string>& gallery_subjects,
                                     const std::vector<std::string>& probe_subjects) {
    std::vector<ScoredPair> pairs;
    pairs.reserve(static_cast<std::size_t>(m.gallery_size() * m.probe_size()));
    for (Eigen::Index g = 0; g < m.gallery_size(); ++g) {
        for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
            pairs.push_back(ScoredPair{m.entry(g, p),
                                       gallery_subjects[static_cast<std::size_t>(g)] ==
                                           probe_subjects[static_cast<std::size_t>(p)]});
        }
    }
    return pairs;
}

SplitEvaluation evaluate_split(const SimilarityMatrix& m,
                               const std::vector<std::string>& gallery_subjects,
                               const std::vector<std::string>& probe_subjects) {
    SplitEvaluation out;
    auto& metrics = out.metrics;

    const auto pairs = matrix_pairs(m, gallery_subjects, probe_subjects);
    out.roc = roc_curve(pairs);
    const auto& curve = out.roc;
    metrics["tar_at_far_1e-1"] = tar_at_far(curve, 1e-1);
    metrics["tar_at_far_1e-2"] = tar_at_far(curve, 1e-2);
    metrics["tar_at_far_1e-3"] = tar_at_far(curve, 1e-3);

    // Closed-set ranks are computed over the genuine probes only; an
    // open-set protocol keeps its impostor probes for the TPIR numbers.
    std::vector<Eigen::Index> genuine_probes;
    for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
        const auto& subject = probe_subjects[static_cast<std::size_t>(p)];
        if (std::find(gallery_subjects.begin(), gallery_subjects.end(), subject) !=
            gallery_subjects.end()) {
            genuine_probes.push_back(p);
        }
    }
    const bool open_set = genuine_probes.size() != static_cast<std::size_t>(m.probe_size());
    if (!genuine_probes.empty()) {
        std::vector<std::string> genuine_ids;
        std::vector<std::string> genuine_subjects;
        for (const Eigen::Index p : genuine_probes) {
            genuine_ids.push_back(m.probe_ids()[static_cast<std::size_t>(p)]);
            genuine_subjects.push_back(probe_subjects[static_cast<std::size_t>(p)]);
        }
        SimilarityMatrix closed(m.gallery_ids(), genuine_ids);
        for (Eigen::Index g = 0; g < m.gallery_size(); ++g) {
            for (std::size_t j = 0; j < genuine_probes.size(); ++j) {
                const auto value = m.entry(g, genuine_probes[j]);
                if (value) {
                    closed.set(g, static_cast<Eigen::Index>(j), *value);
                }
            }
        }
        out.cmc = cmc_curve(closed, gallery_subjects, genuine_subjects);
        const auto rank = [&](std::size_t k) {
            return out.cmc[std::min(k, out.cmc.size()) - 1];
        };
        metrics["cmc_rank_1"] = rank(1);
        metrics["cmc_rank_5"] = rank(5);
        metrics["cmc_rank_10"] = rank(10);
    }
    if (open_set && !genuine_probes.empty()) {
        const auto tpir = tpir_at_fpir(m, gallery_subjects, probe_subjects, {0.01, 0.1});
        metrics["tpir_at_fpir_0.01"] = tpir.at(0.01);
        metrics["tpir_at_fpir_0.1"] = tpir.at(0.1);
    }
    return out;
}

std::map<std::string, double> split_metrics(const SimilarityMatrix& m,
                                            const std::vector<std::string>& gallery_subjects,
                                            const std::vector<std::string>& probe_subjects) {
    return evaluate_split(m, gallery_subjects, probe_subjects).metrics;
}

} // namespace vpe::eval

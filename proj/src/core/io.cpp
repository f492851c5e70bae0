/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/core/io.cpp
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
#include "vpe/core/io.hpp"

#include <fstream>
#include <map>

#include "vpe/core/binary.hpp"
#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"

namespace vpe::binio {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void dump(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) raise(errc::io, "write failed for " + path.string());
}

} // namespace vpe::binio

namespace vpe {

namespace {
constexpr std::uint32_t kFormatVersion = 1;
} // namespace

std::vector<std::string> EmbeddingDataset::subjects() const {
    std::vector<std::string> order;
    for (const auto& e : items) {
        bool seen = false;
        for (const auto& s : order) {
            if (s == e.subject_id) {
                seen = true;
                break;
            }
        }
        if (!seen) order.push_back(e.subject_id);
    }
    return order;
}

void TrainConfig::validate() const {
    if (output_dim <= 0) raise(errc::config, "output_dim must be positive");
    if (margin <= 0) raise(errc::config, "margin must be positive");
    if (learning_rate <= 0) raise(errc::config, "learning_rate must be positive");
    if (negatives_pool <= 0) raise(errc::config, "negatives_pool must be positive");
    if (iterations < 0) raise(errc::config, "iterations must be non-negative");
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingDataset& dataset) {
    std::string out;
    out.append("VPE1");
    binio::put_u32(out, kFormatVersion);
    binio::put_u64(out, dataset.items.size());
    binio::put_u32(out, static_cast<std::uint32_t>(dataset.dim));
    for (const auto& e : dataset.items) {
        if (e.values.size() != dataset.dim) {
            raise(errc::dimension_mismatch, "embedding length differs from dataset dim");
        }
        for (Eigen::Index i = 0; i < e.values.size(); ++i) {
            binio::put_f32(out, static_cast<float>(e.values[i]));
        }
    }
    for (const auto& e : dataset.items) {
        binio::put_string(out, e.subject_id);
        binio::put_string(out, e.media_id);
        binio::put_u8(out, static_cast<std::uint8_t>(e.source_kind));
    }
    binio::dump(path, out);
}

EmbeddingDataset load_embeddings(const std::filesystem::path& path) {
    binio::Reader r(binio::slurp(path), path.string());
    r.expect_magic("VPE1");
    if (r.u32() != kFormatVersion) {
        raise(errc::malformed_header, path.string() + ": unsupported version");
    }
    const std::uint64_t count = r.u64();
    const std::uint32_t dim = r.u32();

    EmbeddingDataset ds;
    ds.dim = static_cast<Eigen::Index>(dim);
    ds.items.resize(count);
    for (auto& e : ds.items) {
        e.values.resize(ds.dim);
        for (Eigen::Index i = 0; i < ds.dim; ++i) e.values[i] = static_cast<double>(r.f32());
    }
    for (auto& e : ds.items) {
        e.subject_id = r.str();
        e.media_id = r.str();
        const std::uint8_t kind = r.u8();
        if (kind > 1) raise(errc::bad_format, path.string() + ": bad source_kind");
        e.source_kind = static_cast<SourceKind>(kind);
    }
    r.require_exhausted();
    return ds;
}

void write_projection(const std::filesystem::path& path, const EmbeddingMatrix& w) {
    std::string out;
    out.append("VPW1");
    binio::put_u32(out, kFormatVersion);
    binio::put_u32(out, static_cast<std::uint32_t>(w.rows()));
    binio::put_u32(out, static_cast<std::uint32_t>(w.cols()));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            binio::put_f32(out, static_cast<float>(w(i, j)));
        }
    }
    binio::dump(path, out);
}

EmbeddingMatrix load_projection(const std::filesystem::path& path) {
    binio::Reader r(binio::slurp(path), path.string());
    r.expect_magic("VPW1");
    if (r.u32() != kFormatVersion) {
        raise(errc::malformed_header, path.string() + ": unsupported version");
    }
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    EmbeddingMatrix w(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
        for (std::uint32_t j = 0; j < cols; ++j) {
            w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                static_cast<double>(r.f32());
        }
    }
    r.require_exhausted();
    return w;
}

void write_template_manifest(const std::filesystem::path& path,
                             const std::vector<Template>& templates,
                             const EmbeddingDataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "template_id,subject_id,media_id,embedding_index\n";
    for (const auto& t : templates) {
        if (t.missing || t.members.empty()) {
            out << t.template_id << ',' << t.subject_id << ",,\n";
            continue;
        }
        for (const std::size_t idx : t.members) {
            if (idx >= dataset.items.size()) {
                raise(errc::unknown_id, "template member index out of range in " + t.template_id);
            }
            out << t.template_id << ',' << t.subject_id << ','
                << dataset.items[idx].media_id << ',' << idx << '\n';
        }
    }
}

std::vector<Template> load_template_manifest(const std::filesystem::path& path,
                                             const EmbeddingDataset& dataset) {
    const auto rows = csv::read_rows(path);
    if (rows.empty() || rows.front().size() != 4 || rows.front()[0] != "template_id") {
        raise(errc::bad_format, path.string() + ": expected template manifest header");
    }

    std::vector<Template> templates;
    std::map<std::string, std::size_t> index;
    for (std::size_t row = 1; row < rows.size(); ++row) {
        const auto& fields = rows[row];
        if (fields.size() != 4) {
            raise(errc::bad_format, path.string() + ": expected 4 fields per manifest row");
        }
        const std::string& tid = fields[0];
        const std::string& subject = fields[1];
        auto [it, inserted] = index.try_emplace(tid, templates.size());
        if (inserted) {
            templates.push_back(Template{tid, subject, {}, false});
        }
        Template& t = templates[it->second];
        if (t.subject_id != subject) {
            raise(errc::bad_format, "template " + tid + " lists conflicting subjects");
        }
        if (fields[3].empty()) {
            t.missing = true;
            continue;
        }
        const long idx = csv::parse_long(fields[3], path.string());
        if (idx < 0 || static_cast<std::size_t>(idx) >= dataset.items.size()) {
            raise(errc::unknown_id,
                  "manifest references embedding " + fields[3] + " outside the dataset");
        }
        const Embedding& e = dataset.items[static_cast<std::size_t>(idx)];
        if (e.subject_id != subject) {
            raise(errc::bad_format, "template " + tid + " member " + fields[3] +
                                        " belongs to subject " + e.subject_id);
        }
        t.members.push_back(static_cast<std::size_t>(idx));
    }
    for (auto& t : templates) {
        if (t.missing && !t.members.empty()) {
            raise(errc::bad_format,
                  "template " + t.template_id + " is flagged missing but has members");
        }
        if (!t.missing && t.members.empty()) {
            raise(errc::bad_format, "template " + t.template_id + " has no members");
        }
    }
    return templates;
}

void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& m) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "gallery_id";
    for (const auto& p : m.probe_ids()) out << ',' << p;
    out << '\n';
    for (Eigen::Index g = 0; g < m.gallery_size(); ++g) {
        out << m.gallery_ids()[static_cast<std::size_t>(g)];
        for (Eigen::Index p = 0; p < m.probe_size(); ++p) {
            out << ',';
            if (m.is_missing(g, p)) {
                out << "MISSING";
            } else {
                out << csv::format_double(m.value(g, p));
            }
        }
        out << '\n';
    }
}

SimilarityMatrix load_similarity_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_rows(path);
    if (rows.empty() || rows.front().empty() || rows.front()[0] != "gallery_id") {
        raise(errc::bad_format, path.string() + ": expected similarity matrix header");
    }
    std::vector<std::string> probe_ids(rows.front().begin() + 1, rows.front().end());
    std::vector<std::string> gallery_ids;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != probe_ids.size() + 1) {
            raise(errc::bad_format, path.string() + ": row width differs from header");
        }
        gallery_ids.push_back(rows[i][0]);
    }
    SimilarityMatrix m(gallery_ids, probe_ids);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t j = 1; j < rows[i].size(); ++j) {
            const Eigen::Index g = static_cast<Eigen::Index>(i - 1);
            const Eigen::Index p = static_cast<Eigen::Index>(j - 1);
            if (rows[i][j] == "MISSING") {
                m.set_missing(g, p);
            } else {
                m.set(g, p, csv::parse_double(rows[i][j], path.string()));
            }
        }
    }
    return m;
}

} // namespace vpe

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/io.hpp
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

#include <filesystem>

#include "vpe/core/similarity.hpp"
#include "vpe/core/types.hpp"

namespace vpe {

/*
 * Embedding file (magic "VPE1"): header
 *   magic (4 bytes) | version u32 | count u64 | dim u32
 * followed by count x dim little-endian f32 values, followed by one label
 * record per embedding:
 *   subject_id (u32 length + UTF-8) | media_id (u32 length + UTF-8) | source_kind u8
 *
 * Projection file (magic "VPW1"): magic | version u32 | rows u32 | cols u32,
 * then rows x cols little-endian f32, row-major.
 *
 * Values are stored at f32 precision; loading and re-writing a file
 * reproduces it bit-exactly.
 */

void write_embeddings(const std::filesystem::path& path, const EmbeddingDataset& dataset);
EmbeddingDataset load_embeddings(const std::filesystem::path& path);

void write_projection(const std::filesystem::path& path, const EmbeddingMatrix& w);
EmbeddingMatrix load_projection(const std::filesystem::path& path);

/*
 * Template manifest: CSV with columns template_id,subject_id,media_id,embedding_index.
 * One row per member; a missing template is a single row with empty
 * media_id and embedding_index fields.
 */
void write_template_manifest(const std::filesystem::path& path,
                             const std::vector<Template>& templates,
                             const EmbeddingDataset& dataset);
std::vector<Template> load_template_manifest(const std::filesystem::path& path,
                                             const EmbeddingDataset& dataset);

/*
 * Similarity matrix: CSV with gallery ids as rows, probe ids as columns.
 * Entries are decimal reals or the literal MISSING.
 */
void write_similarity_csv(const std::filesystem::path& path, const SimilarityMatrix& m);
SimilarityMatrix load_similarity_csv(const std::filesystem::path& path);

} // namespace vpe

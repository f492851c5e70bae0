/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/embed/vector_ops.hpp
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

#include <Eigen/Core>

#include "vpe/core/types.hpp"

namespace vpe::embed {

/// Scales v to unit Euclidean length. A zero vector is a degenerate input
/// and raises, never divides.
Eigen::VectorXd l2_normalize(const Eigen::VectorXd& v);

/// Plain dot product; for unit-length inputs this is the cosine score.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// W * v. Callers that score projections usually re-normalize the result.
Eigen::VectorXd project(const EmbeddingMatrix& w, const Eigen::VectorXd& v);

} // namespace vpe::embed

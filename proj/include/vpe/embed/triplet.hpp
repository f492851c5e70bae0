/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/embed/triplet.hpp
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

#include "vpe/core/types.hpp"

namespace vpe::embed {

/**
 * Similarity-constraint hinge:
 *   max(0, margin + (Wa)·(Wn) - (Wa)·(Wp))
 * Zero exactly when the projected anchor is closer (by inner product) to
 * the positive than to the negative by at least the margin.
 */
double triplet_similarity_loss(const EmbeddingMatrix& w, const Triplet& t, double margin);

/**
 * Distance-constraint hinge (the comparison baseline):
 *   max(0, margin + |W(a-p)|^2 - |W(a-n)|^2)
 */
double triplet_distance_loss(const EmbeddingMatrix& w, const Triplet& t, double margin);

double triplet_loss(const EmbeddingMatrix& w, const Triplet& t, double margin,
                    TripletObjective objective);

/**
 * One SGD step on the similarity hinge. When the hinge is inactive the
 * input matrix is returned unchanged; otherwise
 *   W <- W - lr * W * (a(n-p)^T + (n-p)a^T),
 * which is the exact gradient of the active hinge. Non-finite results
 * raise errc::numeric.
 */
EmbeddingMatrix tse_sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                             double margin);

/**
 * One SGD step on the distance hinge. With u = a-p and v = a-n the active
 * gradient is 2W(uu^T - vv^T).
 */
EmbeddingMatrix tde_sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                             double margin);

EmbeddingMatrix sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                         double margin, TripletObjective objective);

} // namespace vpe::embed

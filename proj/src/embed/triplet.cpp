/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/embed/triplet.cpp
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
#include "vpe/embed/triplet.hpp"

#include <algorithm>

#include "vpe/core/error.hpp"

namespace vpe::embed {

namespace {

void check_dims(const EmbeddingMatrix& w, const Triplet& t) {
    if (t.anchor.size() != w.cols() || t.positive.size() != w.cols() ||
        t.negative.size() != w.cols()) {
        raise(errc::dimension_mismatch, "triplet vectors do not match the projection width");
    }
}

void check_finite(const EmbeddingMatrix& w) {
    if (!w.allFinite()) {
        raise(errc::numeric, "projection update produced non-finite entries");
    }
}

} // namespace

double triplet_similarity_loss(const EmbeddingMatrix& w, const Triplet& t, double margin) {
    check_dims(w, t);
    const Eigen::VectorXd wa = w * t.anchor;
    const double pos = wa.dot(w * t.positive);
    const double neg = wa.dot(w * t.negative);
    return std::max(0.0, margin + neg - pos);
}

double triplet_distance_loss(const EmbeddingMatrix& w, const Triplet& t, double margin) {
    check_dims(w, t);
    const double dp = (w * (t.anchor - t.positive)).squaredNorm();
    const double dn = (w * (t.anchor - t.negative)).squaredNorm();
    return std::max(0.0, margin + dp - dn);
}

double triplet_loss(const EmbeddingMatrix& w, const Triplet& t, double margin,
                    TripletObjective objective) {
    return objective == TripletObjective::similarity ? triplet_similarity_loss(w, t, margin)
                                                     : triplet_distance_loss(w, t, margin);
}

EmbeddingMatrix tse_sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                             double margin) {
    if (triplet_similarity_loss(w, t, margin) == 0.0) {
        return w;
    }
    // W * (a d^T + d a^T) expands to (Wa) d^T + (Wd) a^T with d = n - p.
    const Eigen::VectorXd d = t.negative - t.positive;
    const Eigen::VectorXd wa = w * t.anchor;
    const Eigen::VectorXd wd = w * d;
    EmbeddingMatrix next = w;
    next.noalias() -= learning_rate * (wa * d.transpose() + wd * t.anchor.transpose());
    check_finite(next);
    return next;
}

EmbeddingMatrix tde_sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                             double margin) {
    if (triplet_distance_loss(w, t, margin) == 0.0) {
        return w;
    }
    const Eigen::VectorXd u = t.anchor - t.positive;
    const Eigen::VectorXd v = t.anchor - t.negative;
    const Eigen::VectorXd wu = w * u;
    const Eigen::VectorXd wv = w * v;
    EmbeddingMatrix next = w;
    next.noalias() -= 2.0 * learning_rate * (wu * u.transpose() - wv * v.transpose());
    check_finite(next);
    return next;
}

EmbeddingMatrix sgd_step(const EmbeddingMatrix& w, const Triplet& t, double learning_rate,
                         double margin, TripletObjective objective) {
    return objective == TripletObjective::similarity
               ? tse_sgd_step(w, t, learning_rate, margin)
               : tde_sgd_step(w, t, learning_rate, margin);
}

} // namespace vpe::embed

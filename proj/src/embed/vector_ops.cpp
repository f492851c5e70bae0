/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/embed/vector_ops.cpp
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
#include "vpe/embed/vector_ops.hpp"

#include "vpe/core/error.hpp"

namespace vpe::embed {

Eigen::VectorXd l2_normalize(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (norm < 1e-12) {
        raise(errc::degenerate_input, "cannot normalize a zero vector");
    }
    return v / norm;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) {
        raise(errc::dimension_mismatch, "cosine_similarity: vector lengths differ");
    }
    return a.dot(b);
}

Eigen::VectorXd project(const EmbeddingMatrix& w, const Eigen::VectorXd& v) {
    if (w.cols() != v.size()) {
        raise(errc::dimension_mismatch, "project: matrix columns differ from vector length");
    }
    return w * v;
}

} // namespace vpe::embed

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: src/core/rng.cpp
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
#include "vpe/core/rng.hpp"

#include <cmath>

#include "vpe/core/error.hpp"

namespace vpe {

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) raise(errc::config, "uniform_index: n must be positive");
    return static_cast<std::size_t>(next_u64() % n);
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0, 1] so the log stays finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
}

Eigen::VectorXd Rng::unit_vector(Eigen::Index n) {
    for (;;) {
        Eigen::VectorXd v = normal_vector(n);
        const double norm = v.norm();
        if (norm > 1e-12) return v / norm;
    }
}

} // namespace vpe

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/rng.hpp
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
#include <random>
#include <vector>

#include <Eigen/Core>

namespace vpe {

/**
 * Seeded random stream. Every random decision in the toolkit flows through
 * one of these; there is no other entropy source.
 *
 * The generator is std::mt19937_64, whose integer output is pinned by the
 * standard, and all value transforms (uniform, normal, index draws) are
 * implemented here rather than with std:: distributions, which are
 * implementation-defined. Identical seeds therefore reproduce identical
 * draw sequences across runs.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    /// Standard normal via the Box-Muller transform (pairs are cached).
    double normal();

    Eigen::VectorXd normal_vector(Eigen::Index n);

    /// Uniform direction on the unit sphere in n dimensions.
    Eigen::VectorXd unit_vector(Eigen::Index n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace vpe

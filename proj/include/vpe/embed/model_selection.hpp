/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/embed/model_selection.hpp
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

#include <vector>

#include "vpe/core/types.hpp"

namespace vpe::embed {

/**
 * Picks the output dimension by subject-disjoint k-fold validation: each
 * candidate is trained on the out-of-fold subjects and scored by the mean
 * validation TAR at FAR 1e-2 over all in-fold embedding pairs. Ties go to
 * the smaller dimension. A singleton candidate list short-circuits without
 * training anything.
 */
int select_output_dim(const EmbeddingDataset& pool, const std::vector<int>& candidates, int folds,
                      const TrainConfig& base_cfg);

} // namespace vpe::embed

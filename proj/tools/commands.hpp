/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tools/commands.hpp
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

namespace vpe::cli {

/// Parses and dispatches one invocation. Exit codes: 0 ok, 2 bad input or
/// configuration, 3 numerical failure.
int run(int argc, char** argv);

} // namespace vpe::cli

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/error.hpp
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

#include <stdexcept>
#include <string>

namespace vpe {

// Error categories. The CLI maps everything except `numeric` to exit
// code 2 (bad input or configuration) and `numeric` to exit code 3.
enum class errc {
    malformed_header,
    truncated_payload,
    dimension_mismatch,
    bad_format,
    config,
    degenerate_input,
    unknown_id,
    order_mismatch,
    out_of_order,
    io,
    numeric,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }
    bool is_numeric() const noexcept { return code_ == errc::numeric; }

private:
    errc code_;
};

[[noreturn]] void raise(errc code, const std::string& message);

} // namespace vpe

/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/csv.hpp
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
#include <string>
#include <string_view>
#include <vector>

namespace vpe::csv {

std::vector<std::string> split_line(const std::string& line, char delim = ',');

/// Reads all rows; blank lines and lines starting with '#' are skipped.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a full field; throws errc::bad_format on junk.
double parse_double(std::string_view field, const std::string& context);
long parse_long(std::string_view field, const std::string& context);

} // namespace vpe::csv

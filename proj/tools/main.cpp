/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tools/main.cpp
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
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "vpe/core/error.hpp"

int main(int argc, char** argv) {
    try {
        return vpe::cli::run(argc, argv);
    } catch (const vpe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numeric() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

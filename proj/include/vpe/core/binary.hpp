/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: include/vpe/core/binary.hpp
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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>

#include "vpe/core/error.hpp"

namespace vpe::binio {

// Explicit little-endian encoding, independent of host byte order.

inline void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline void put_string(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

class Reader {
public:
    Reader(std::string data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}

    std::uint8_t u8() {
        need(1, "byte field");
        return byte();
    }

    std::uint32_t u32() {
        need(4, "header field");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        need(8, "header field");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
        return v;
    }

    float f32() {
        need(4, "float payload");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
        return std::bit_cast<float>(v);
    }

    std::string str() {
        const std::uint32_t len = u32();
        need(len, "string payload");
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    void expect_magic(const char (&magic)[5]) {
        if (data_.size() < 4 || std::memcmp(data_.data(), magic, 4) != 0) {
            raise(errc::malformed_header, name_ + ": bad magic, expected " + magic);
        }
        pos_ = 4;
    }

    void require_exhausted() {
        if (pos_ != data_.size()) {
            raise(errc::truncated_payload, name_ + ": trailing bytes after payload");
        }
    }

    const std::string& name() const { return name_; }

private:
    std::uint8_t byte() { return static_cast<std::uint8_t>(data_[pos_++]); }

    void need(std::size_t n, const char* what) {
        if (data_.size() - pos_ < n) {
            raise(errc::truncated_payload, name_ + ": truncated " + what);
        }
    }

    std::string data_;
    std::string name_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::filesystem::path& path);
void dump(const std::filesystem::path& path, const std::string& data);

} // namespace vpe::binio

// Copyright 2026 The fanns Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Little-endian binary container helpers used by every index snapshot.
// Layouts are documented in docs/snapshot_format.md.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "fanns/common.hpp"

namespace fanns::io {

static_assert(std::endian::native == std::endian::little, "snapshot code assumes a little-endian host");

class BinaryWriter {
 public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    template <class T>
        requires std::is_trivially_copyable_v<T>
    void put(const T& v) {
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }

    template <class T>
        requires std::is_trivially_copyable_v<T>
    void put_array(const std::vector<T>& v) {
        put<std::uint64_t>(v.size());
        out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
    }

    void put_string(std::string_view s) {
        put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    /// 8-byte magic followed by a uint32 format version.
    void header(std::string_view magic, std::uint32_t version);

 private:
    std::ostream& out_;
};

class BinaryReader {
 public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    template <class T>
        requires std::is_trivially_copyable_v<T>
    T get() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in_) throw Error("snapshot truncated");
        return v;
    }

    template <class T>
        requires std::is_trivially_copyable_v<T>
    std::vector<T> get_array(std::uint64_t max_elements = (1ull << 34)) {
        const auto n = get<std::uint64_t>();
        if (n > max_elements) throw Error("snapshot array length out of range");
        std::vector<T> v(n);
        in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
        if (!in_) throw Error("snapshot truncated");
        return v;
    }

    std::string get_string();

    /// Checks magic and returns the version; throws Error on mismatch.
    std::uint32_t header(std::string_view magic, std::uint32_t max_version);

 private:
    std::istream& in_;
};

}  // namespace fanns::io

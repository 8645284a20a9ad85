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

#include "fanns/serialize.hpp"

#include <array>

namespace fanns::io {

void BinaryWriter::header(std::string_view magic, std::uint32_t version) {
    std::array<char, 8> m{};
    for (std::size_t i = 0; i < m.size() && i < magic.size(); ++i) m[i] = magic[i];
    out_.write(m.data(), m.size());
    put(version);
}

std::string BinaryReader::get_string() {
    const auto n = get<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) throw Error("snapshot truncated");
    return s;
}

std::uint32_t BinaryReader::header(std::string_view magic, std::uint32_t max_version) {
    std::array<char, 8> m{};
    in_.read(m.data(), m.size());
    if (!in_) throw Error("snapshot truncated");
    for (std::size_t i = 0; i < m.size(); ++i) {
        const char want = i < magic.size() ? magic[i] : '\0';
        if (m[i] != want) throw Error("bad snapshot magic, expected " + std::string(magic));
    }
    const auto version = get<std::uint32_t>();
    if (version == 0 || version > max_version) {
        throw Error("unsupported snapshot version " + std::to_string(version));
    }
    return version;
}

}  // namespace fanns::io

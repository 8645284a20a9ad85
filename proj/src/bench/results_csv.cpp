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

#include "fanns/bench/results_csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "fanns/common.hpp"

namespace fanns::bench {

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    if (quoted) throw Error("results csv: unterminated quote");
    return out;
}

template <class T>
T parse_num(const std::string& s) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("results csv: bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<ResultRow> rows_from_sweep(const std::string& method, const std::string& family, const std::string& params_json,
                                       const std::vector<SweepPoint>& points, const BuildInfo& build) {
    std::vector<ResultRow> rows;
    for (const auto& p : points) {
        ResultRow base{method, family, params_json, p.width, "", 0.0, 0.0, build.build_seconds, build.peak_rss_bytes,
                       build.index_bytes};
        for (std::size_t r = 0; r < p.recall_runs.size(); ++r) {
            ResultRow row = base;
            row.run = std::to_string(r);
            row.recall = p.recall_runs[r];
            row.qps = p.qps_runs[r];
            rows.push_back(row);
        }
        ResultRow mean = base, sd = base;
        mean.run = "mean";
        mean.recall = p.recall_mean;
        mean.qps = p.qps_mean;
        sd.run = "std";
        sd.recall = p.recall_std;
        sd.qps = p.qps_std;
        sd.build_seconds = 0.0;
        rows.push_back(mean);
        rows.push_back(sd);
    }
    return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header) {
    if (header) out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        out << quote(r.method) << ',' << quote(r.filter_family) << ',' << quote(r.params_json) << ',' << r.width << ','
            << r.run << ',' << fmt(r.recall) << ',' << fmt(r.qps) << ',' << fmt(r.build_seconds) << ',' << r.peak_rss_bytes
            << ',' << r.index_bytes << '\n';
    }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader) throw Error("results csv: missing or unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 10) throw Error("results csv: expected 10 fields, got " + std::to_string(f.size()));
        rows.push_back({f[0], f[1], f[2], parse_num<std::size_t>(f[3]), f[4], parse_num<double>(f[5]), parse_num<double>(f[6]),
                        parse_num<double>(f[7]), parse_num<std::size_t>(f[8]), parse_num<std::size_t>(f[9])});
    }
    return rows;
}

}  // namespace fanns::bench

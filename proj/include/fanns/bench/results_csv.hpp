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

#include <iosfwd>
#include <string>
#include <vector>

#include "fanns/bench/sweep.hpp"

namespace fanns::bench {

/// One line of the results CSV. `run` is the run number, or "mean"/"std"
/// on aggregate rows.
struct ResultRow {
    std::string method;
    std::string filter_family;
    std::string params_json;
    std::size_t width = 0;
    std::string run;
    double recall = 0.0;
    double qps = 0.0;
    double build_seconds = 0.0;
    std::size_t peak_rss_bytes = 0;
    std::size_t index_bytes = 0;
};

inline constexpr const char* kResultsHeader =
    "method,filter_family,params_json,width,run,recall,qps,build_seconds,peak_rss_bytes,index_bytes";

struct BuildInfo {
    double build_seconds = 0.0;
    std::size_t peak_rss_bytes = 0;
    std::size_t index_bytes = 0;
};

/// Per-run rows for every point followed by its "mean" and "std" rows.
std::vector<ResultRow> rows_from_sweep(const std::string& method, const std::string& family, const std::string& params_json,
                                       const std::vector<SweepPoint>& points, const BuildInfo& build);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header = true);
/// Parses what write_results_csv produced; throws Error on malformed input.
std::vector<ResultRow> read_results_csv(std::istream& in);

}  // namespace fanns::bench

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

// fanns command-line front end: dataset/query generation, ground truth,
// benchmark sweeps and greedy parameter tuning.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fanns/bench/generator.hpp"
#include "fanns/bench/harness.hpp"
#include "fanns/io.hpp"
#include "fanns/oracle.hpp"
#include "fanns/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace fanns;
using nlohmann::json;

namespace {

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

// Accepts a path to a JSON file or inline JSON text.
json json_arg(const std::string& arg) {
    if (arg.empty()) return json::object();
    if (arg.front() == '{' || arg.front() == '[') return json::parse(arg);
    return read_json_file(io::resolve_data_path(arg));
}

std::string infer_family(const std::vector<Query>& qs) {
    if (qs.empty() || !qs.front().filter) return "none";
    switch (qs.front().filter->op()) {
        case Filter::Op::Em:
            return "em";
        case Filter::Op::Range:
            return "r";
        case Filter::Op::Emis:
            return "emis";
        default:
            throw Error("cannot infer filter family from a composite filter; pass --family");
    }
}

struct Loaded {
    Dataset dataset;
    std::vector<Query> queries;
    std::vector<KnnResult> truth;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtered approximate nearest neighbor search toolkit"};
    app.require_subcommand(1);
    std::string simd = "auto";
    app.add_option("--simd", simd, "Kernel variant: auto or scalar")->check(CLI::IsMember({"auto", "scalar"}));

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    bench::GenSpec gspec;
    std::string gen_schema, gen_out;
    gen->add_option("--n", gspec.n, "Number of items")->required();
    gen->add_option("--d", gspec.d, "Dimensionality")->required();
    gen->add_option("--seed", gspec.seed, "Random seed");
    gen->add_option("--components", gspec.components, "Gaussian mixture components");
    gen->add_option("--spread", gspec.spread, "Per-coordinate spread around a component center");
    gen->add_option("--schema", gen_schema, "Schema JSON (list of {name, kind, ...generation keys})");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // queries
    auto* qry = app.add_subcommand("queries", "Generate a query set");
    bench::QueryGenSpec qspec;
    std::string q_data, q_family = "none", q_out;
    qry->add_option("--data", q_data, "Dataset directory")->required();
    qry->add_option("--family", q_family, "none, em, r or emis");
    qry->add_option("--p", qspec.p, "Number of queries");
    qry->add_option("--k", qspec.k, "Neighbors per query");
    qry->add_option("--seed", qspec.seed, "Random seed");
    qry->add_option("--sel-low", qspec.sel_low, "Lower selectivity bound");
    qry->add_option("--sel-high", qspec.sel_high, "Upper selectivity bound");
    qry->add_option("--column", qspec.column, "Attribute column to filter on");
    qry->add_option("--noise", qspec.noise, "Perturbation norm");
    qry->add_option("--out", q_out, "Output query file (JSON lines)")->required();

    // gt
    auto* gt = app.add_subcommand("gt", "Compute exact ground truth");
    std::string gt_data, gt_queries, gt_out;
    std::size_t gt_k = 10;
    gt->add_option("--data", gt_data, "Dataset directory")->required();
    gt->add_option("--queries", gt_queries, "Query file")->required();
    gt->add_option("--k", gt_k, "Neighbors per query");
    gt->add_option("--out", gt_out, "Ground-truth output file")->required();

    // bench
    auto* bch = app.add_subcommand("bench", "Recall/QPS sweep for one method");
    std::string b_data, b_queries, b_gt, b_index, b_params, b_widths = "10,20,50,100", b_family, b_out;
    std::size_t b_runs = 5;
    bool b_append = false;
    bch->add_option("--data", b_data, "Dataset directory")->required();
    bch->add_option("--queries", b_queries, "Query file")->required();
    bch->add_option("--gt", b_gt, "Ground-truth file")->required();
    bch->add_option("--index", b_index, "Method name")->required()->check(CLI::IsMember(bench::method_names()));
    bch->add_option("--params", b_params, "Method parameters (JSON file or inline JSON)");
    bch->add_option("--widths", b_widths, "Comma-separated search widths; 'max' = exhaustive");
    bch->add_option("--runs", b_runs, "Repetitions per width");
    bch->add_option("--family", b_family, "Filter family tag for the CSV (inferred when omitted)");
    bch->add_option("--out", b_out, "Results CSV")->required();
    bch->add_flag("--append", b_append, "Append rows instead of overwriting");

    // tune
    auto* tun = app.add_subcommand("tune", "Greedy parameter search for one method");
    std::string t_data, t_queries, t_gt, t_index, t_spec, t_widths = "10,20,50,100,200", t_family, t_out;
    std::size_t t_sample = 50;
    std::uint64_t t_seed = 1;
    tun->add_option("--data", t_data, "Dataset directory")->required();
    tun->add_option("--queries", t_queries, "Query file")->required();
    tun->add_option("--gt", t_gt, "Ground-truth file")->required();
    tun->add_option("--index", t_index, "Method name")->required()->check(CLI::IsMember(bench::method_names()));
    tun->add_option("--spec", t_spec, "Tuning spec: [{name, values, default}, ...]")->required();
    tun->add_option("--widths", t_widths, "Search widths used for the reward curve");
    tun->add_option("--sample", t_sample, "Queries sampled for each reward");
    tun->add_option("--seed", t_seed, "Base seed for query sampling");
    tun->add_option("--family", t_family, "Filter family tag (inferred when omitted)");
    tun->add_option("--out", t_out, "Write the chosen assignment as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simd == "scalar") simd::set_preference(simd::Preference::Scalar);

        auto load = [](const std::string& data, const std::string& queries, const std::string& truth) {
            Loaded l{io::load_dataset(io::resolve_data_path(data)), {}, {}};
            l.queries = io::read_queries(io::resolve_data_path(queries), l.dataset);
            if (!truth.empty()) {
                l.truth = io::read_ground_truth(io::resolve_data_path(truth));
                if (l.truth.size() != l.queries.size()) throw Error("ground truth does not match the query file");
            }
            return l;
        };

        if (*gen) {
            gspec.columns = gen_schema.empty() ? bench::default_columns()
                                               : bench::columns_from_json(read_json_file(io::resolve_data_path(gen_schema)));
            const auto ds = bench::gen_dataset(gspec);
            io::save_dataset(io::resolve_data_path(gen_out), ds);
            std::cout << "wrote " << ds.size() << " items to " << io::resolve_data_path(gen_out).string() << '\n';
        } else if (*qry) {
            const auto ds = io::load_dataset(io::resolve_data_path(q_data));
            const auto idx = AttributeIndexes::build(ds);
            qspec.family = bench::parse_family(q_family);
            const auto qs = bench::gen_queries(ds, idx, qspec);
            io::write_queries(io::resolve_data_path(q_out), qs.queries);
            std::cout << "wrote " << qs.queries.size() << " " << q_family << " queries\n";
        } else if (*gt) {
            const auto l = load(gt_data, gt_queries, "");
            const auto truth = batch_ground_truth(l.dataset, l.queries, gt_k);
            io::write_ground_truth(io::resolve_data_path(gt_out), truth);
            std::cout << "wrote ground truth for " << truth.size() << " queries\n";
        } else if (*bch) {
            const auto l = load(b_data, b_queries, b_gt);
            const auto idx = AttributeIndexes::build(l.dataset);
            const auto family = b_family.empty() ? infer_family(l.queries) : b_family;
            const auto outcome = bench::run_bench(l.dataset, idx, b_index, json_arg(b_params), family, l.queries, l.truth,
                                                  bench::parse_widths(b_widths), b_runs);
            const auto out_path = io::resolve_data_path(b_out);
            const bool header = !b_append || !fs::exists(out_path) || fs::file_size(out_path) == 0;
            std::ofstream out(out_path, b_append ? std::ios::app : std::ios::trunc);
            if (!out) throw Error("cannot write " + out_path.string());
            bench::write_results_csv(out, outcome.rows, header);
            for (const auto& p : outcome.points) {
                std::cout << b_index << " width=" << p.width << " recall=" << p.recall_mean << " qps=" << p.qps_mean << '\n';
            }
        } else if (*tun) {
            const auto l = load(t_data, t_queries, t_gt);
            const auto idx = AttributeIndexes::build(l.dataset);
            const auto family = t_family.empty() ? infer_family(l.queries) : t_family;
            const auto pos = bench::sample_positions(l.queries.size(), t_sample, bench::tuning_seed(t_index, family, t_seed));
            std::vector<Query> qs;
            std::vector<KnnResult> truth;
            for (auto p : pos) {
                qs.push_back(l.queries[p]);
                truth.push_back(l.truth[p]);
            }
            const auto spec = bench::TuneSpec::from_json(json_arg(t_spec));
            const auto widths = bench::parse_widths(t_widths);
            const auto res = bench::greedy_parameter_search(spec, [&](const json& a) {
                const auto r = bench::tune_reward(l.dataset, idx, t_index, a, qs, truth, widths);
                std::cout << a.dump() << " -> " << (r.reached ? "qps " : "recall ") << r.value << '\n';
                return r;
            });
            std::cout << "best " << res.assignment.dump() << '\n';
            if (!t_out.empty()) {
                std::ofstream out(io::resolve_data_path(t_out));
                out << res.assignment.dump(2) << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

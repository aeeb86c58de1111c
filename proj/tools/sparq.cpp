// Copyright 2026 The SparQ Authors
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

// Command-line front end: run QASM files, QLSS sweeps and benchmarks.

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparq/bench/scaling.hpp"
#include "sparq/bench/table.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/qasm/qasm.hpp"
#include "sparq/qlss/sweep.hpp"

namespace {

using namespace sparq;

constexpr int kParseFailure = 2;
constexpr int kRuntimeFailure = 3;

template <class T>
std::vector<T> split_list(const std::string& text, T (*convert)(const std::string&))
{
    std::vector<T> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(convert(item));
        }
    }
    if (out.empty()) {
        throw Error(Errc::InvalidArgument, "empty list '" + text + "'");
    }
    return out;
}

std::size_t to_size(const std::string& s)
{
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || v < 0) {
        throw Error(Errc::InvalidArgument, "not a count: '" + s + "'");
    }
    return static_cast<std::size_t>(std::llround(v));
}

std::string to_str(const std::string& s) { return s; }

// Writes to the named file, or stdout for "" / "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
    }
    write(out);
}

void dump_profile(const std::string& path)
{
    if (!path.empty()) {
        emit(path, [](std::ostream& o) { Profiler::instance().dump_csv(o); });
    }
}

struct RunArgs {
    std::string file;
    std::size_t threads = 0;
    std::size_t shots = 0;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::string memory;
    std::string report = "json";
    bool dump_state = false;
    std::string profile;
};

int do_run(const RunArgs& a)
{
    qasm::CircuitIR ir;
    std::optional<QramMemory> memory;
    try {
        std::ifstream in(a.file);
        if (!in) {
            throw Error(Errc::ParseError, "cannot open '" + a.file + "'");
        }
        std::stringstream text;
        text << in.rdbuf();
        ir = qasm::parse_qasm(text.str());
        if (!a.memory.empty()) {
            memory = load_memory_file(a.memory);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseFailure;
    }
    try {
        qasm::RunOptions opt;
        if (a.threads > 0) {
            opt.exec.thread_count = a.threads;
        }
        opt.shots = a.shots;
        opt.seed = a.seed;
        opt.trials = a.trials;
        opt.qram_memory = memory;
        opt.keep_state = a.dump_state;
        Profiler::instance().set_enabled(!a.profile.empty());
        const auto report = qasm::lower_and_run(ir, opt);
        if (a.report == "csv") {
            std::cout << qasm::report_to_csv(report);
        } else {
            std::cout << qasm::report_to_json(report).dump(2) << '\n';
        }
        dump_profile(a.profile);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return 0;
}

struct QlssArgs {
    std::string n = "2,3,4";
    std::string kappa = "10,30,50";
    std::string variant = "pd,nh";
    std::string t_grid = "100,1000,10000";
    std::size_t reps = 10;
    std::uint64_t seed = 1;
    std::size_t fit_min_t = 1000;
    unsigned threads = 1;
    std::string out;
};

int do_qlss(const QlssArgs& a)
{
    qlss::SweepConfig cfg;
    cfg.sizes.clear();
    for (auto n : split_list<std::size_t>(a.n, to_size)) {
        cfg.sizes.push_back(static_cast<unsigned>(n));
    }
    cfg.kappas = split_list<double>(a.kappa, [](const std::string& s) { return std::stod(s); });
    cfg.variants.clear();
    for (const auto& v : split_list<std::string>(a.variant, to_str)) {
        cfg.variants.push_back(qlss::parse_variant(v));
    }
    cfg.T_grid = split_list<std::size_t>(a.t_grid, to_size);
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    cfg.fit_min_T = a.fit_min_t;
    cfg.threads = a.threads;
    const auto result = qlss::experiment_sweep(cfg);
    emit(a.out, [&](std::ostream& o) { qlss::write_sweep_csv(o, result); });
    // Summary on stderr so stdout stays a clean CSV when --out is omitted.
    std::cerr << "variant,N,kappa,slope,theta,max_norm_drift,mean_error_by_T\n";
    for (const auto& c : result.curves) {
        std::cerr << to_string(c.variant) << ',' << c.N << ',' << c.kappa << ',' << c.slope << ',' << c.theta() << ','
                  << c.max_norm_drift << ',';
        for (std::size_t i = 0; i < c.T.size(); ++i) {
            std::cerr << (i ? " " : "") << c.T[i] << ':' << c.mean_error[i];
        }
        std::cerr << '\n';
    }
    std::cerr << "schedule: f(s) = kappa/(kappa-1) * (1 - 1/(1 + s(kappa-1)))\n";
    return 0;
}

struct ScalingArgs {
    std::string ops = "x,z,rz,cx,h,rot";
    std::string grid = "1e3:1e7";
    unsigned per_decade = 2;
    std::size_t trials = 10;
    std::size_t threads = 0;
    bool warm = false;
    std::string out;
};

int do_scaling(const ScalingArgs& a)
{
    ExecConfig cfg = ExecConfig::from_env();
    if (a.threads > 0) {
        cfg.thread_count = a.threads;
    }
    const auto result = bench::scaling_experiment(split_list<std::string>(a.ops, to_str),
        bench::parse_grid(a.grid, a.per_decade), a.trials, cfg, 1, 200000,
        a.warm ? bench::CacheMode::Warm : bench::CacheMode::Cold);
    emit(a.out, [&](std::ostream& o) { bench::write_scaling_csv(o, result); });
    std::cerr << "op,family,slope\n";
    for (const auto& f : result.fits) {
        std::cerr << f.op << ',' << to_string(f.family) << ',' << f.slope << '\n';
    }
    return 0;
}

struct TableArgs {
    std::string circuits;
    std::string threads = "1";
    std::size_t trials = 10;
    std::string out;
};

int do_table(const TableArgs& a)
{
    const auto circuits = a.circuits.empty() ? bench::default_circuits() : bench::load_circuits(a.circuits);
    const auto rows = bench::table_benchmark(circuits, split_list<std::size_t>(a.threads, to_size), a.trials);
    emit(a.out, [&](std::ostream& o) { bench::write_table_csv(o, rows); });
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "sparq: sparse branch-based quantum circuit simulator" };
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "execute an OpenQASM 2.0 file");
    run_cmd->add_option("file", run.file, "circuit file")->required();
    run_cmd->add_option("--threads", run.threads, "worker threads (default: SPARQ_THREADS or 1)");
    run_cmd->add_option("--shots", run.shots, "measurement shots");
    run_cmd->add_option("--seed", run.seed, "sampling seed");
    run_cmd->add_option("--trials", run.trials, "timed repetitions");
    run_cmd->add_option("--qram-memory", run.memory, "JSON memory for qram instructions");
    run_cmd->add_option("--report", run.report, "report format")->check(CLI::IsMember({ "json", "csv" }));
    run_cmd->add_flag("--dump-state", run.dump_state, "include final branches in the report");
    run_cmd->add_option("--profile", run.profile, "write per-op timings as CSV");

    QlssArgs q;
    auto* qlss_cmd = app.add_subcommand("qlss", "adiabatic linear-solver error sweep");
    qlss_cmd->add_option("--n", q.n, "log2 of system sizes, comma separated (2..4)");
    qlss_cmd->add_option("--kappa", q.kappa, "condition numbers, comma separated");
    qlss_cmd->add_option("--variant", q.variant, "pd, nh or both");
    qlss_cmd->add_option("--T-grid", q.t_grid, "walk step counts, comma separated");
    qlss_cmd->add_option("--reps", q.reps, "random systems per point");
    qlss_cmd->add_option("--seed", q.seed, "base seed");
    qlss_cmd->add_option("--fit-min-T", q.fit_min_t, "smallest T in the slope fit");
    qlss_cmd->add_option("--threads", q.threads, "parallel walks");
    qlss_cmd->add_option("--out", q.out, "CSV path (default stdout)");

    auto* bench_cmd = app.add_subcommand("bench", "benchmarks");
    bench_cmd->require_subcommand(1);
    ScalingArgs sc;
    auto* scaling_cmd = bench_cmd->add_subcommand("scaling", "time and memory proxy against branch count");
    scaling_cmd->add_option("--ops", sc.ops, "ops from x,z,rz,cx,h,rot");
    scaling_cmd->add_option("--grid", sc.grid, "branch range lo:hi, log spaced");
    scaling_cmd->add_option("--per-decade", sc.per_decade, "grid points per decade");
    scaling_cmd->add_option("--trials", sc.trials, "trials per point");
    scaling_cmd->add_option("--threads", sc.threads, "worker threads");
    scaling_cmd->add_flag("--warm", sc.warm, "time without flushing caches first");
    scaling_cmd->add_option("--out", sc.out, "CSV path (default stdout)");
    TableArgs tb;
    auto* table_cmd = bench_cmd->add_subcommand("table", "circuit benchmark table");
    table_cmd->add_option("--circuits", tb.circuits, "directory of .qasm files (default: built-in set)");
    table_cmd->add_option("--threads", tb.threads, "thread counts, comma separated");
    table_cmd->add_option("--trials", tb.trials, "trials per row");
    table_cmd->add_option("--out", tb.out, "CSV path (default stdout)");
    std::string emit_dir;
    auto* emit_cmd = bench_cmd->add_subcommand("emit", "write the built-in benchmark circuits");
    emit_cmd->add_option("dir", emit_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return do_run(run);
    }
    try {
        if (qlss_cmd->parsed()) {
            return do_qlss(q);
        }
        if (scaling_cmd->parsed()) {
            return do_scaling(sc);
        }
        if (table_cmd->parsed()) {
            return do_table(tb);
        }
        if (emit_cmd->parsed()) {
            bench::write_circuits(emit_dir, bench::default_circuits());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return 0;
}

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tricolor/gen.hpp"
#include "tricolor/io.hpp"
#include "tricolor/oracle.hpp"
#include "tricolor/solver.hpp"

namespace tricolor {

inline constexpr int kExitSat = 0;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitError = 1;
inline constexpr int kExitTimeout = 124;

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write file '" + path + "'");
    file << content;
}

inline SolveMode parse_mode(const std::string& name) {
    if (name == "complete") return SolveMode::Complete;
    if (name == "paper") return SolveMode::Paper;
    if (name == "randomized") return SolveMode::Randomized;
    if (name == "baseline-ms") return SolveMode::BaselineMs;
    if (name == "diam3") return SolveMode::Diam3;
    throw std::runtime_error("unknown mode '" + name + "'");
}

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Sat: return "SAT";
        case Verdict::Unsat: return "UNSAT";
        case Verdict::Timeout: return "TIMEOUT";
    }
    return "?";
}

inline int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::Sat: return kExitSat;
        case Verdict::Unsat: return kExitUnsat;
        case Verdict::Timeout: return kExitTimeout;
    }
    return kExitError;
}

inline std::string colors_line(const std::vector<int>& values, int shift = 0) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(values[i] + shift);
    }
    return out;
}

inline void print_stats(const SearchStats& s, std::ostream& out) {
    out << "nodes=" << s.nodes_expanded << "\n"
        << "r1=" << s.r1 << "\n"
        << "r2=" << s.r2 << "\n"
        << "r3=" << s.r3 << "\n"
        << "b1=" << s.b1 << "\n"
        << "b2=" << s.b2 << "\n"
        << "b3=" << s.b3 << "\n"
        << "b4=" << s.b4 << "\n"
        << "witness_pairs=" << s.witness_tuples_checked << "\n"
        << "fallbacks=" << s.complete_fallbacks << "\n"
        << "progress_violations=" << s.progress_violations << "\n"
        << "enum_assignments=" << s.enumeration_assignments << "\n"
        << "deg_branches=" << s.deg_branches << "\n"
        << "ball_enumerations=" << s.ball_enumerations << "\n"
        << "max_depth=" << s.max_depth << "\n"
        << "ms=" << s.wall_time_ms << "\n";
}

struct SolveFlags {
    std::string file;
    std::string mode = "complete";
    double k_const = 1.0;
    std::uint64_t seed = 0;
    std::int64_t budget = 200000;
    int retries = 16;
    double time_limit = 0.0;
    bool stats = false;
    std::string cert_path;
    std::string dump_cnf_path;
    int threads = 1;

    SolverConfig config() const {
        SolverConfig cfg;
        cfg.mode = parse_mode(mode);
        cfg.k_const = k_const;
        cfg.rng_seed = seed;
        cfg.witness_budget = budget;
        cfg.max_retries = retries;
        if (time_limit > 0) cfg.time_limit_seconds = time_limit;
        cfg.threads = threads;
        return cfg;
    }
};

inline void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("file", f.file, "instance file ('-' or absent for stdin)");
    cmd->add_option("--mode", f.mode, "complete|paper|randomized|baseline-ms|diam3");
    cmd->add_option("--k", f.k_const, "witness set size scale factor");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--budget", f.budget, "witness enumeration budget per node");
    cmd->add_option("--retries", f.retries, "sampling retries per node (randomized mode)");
    cmd->add_option("--time-limit", f.time_limit, "time limit in seconds");
    cmd->add_flag("--stats", f.stats, "print key=value search statistics");
    cmd->add_option("--cert", f.cert_path, "write the certificate to this file");
    cmd->add_option("--threads", f.threads, "worker threads for enumerations");
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
                    std::ostream& err) {
    CLI::App app{"exact list 3-coloring and list homomorphism solver for small-diameter graphs"};
    app.require_subcommand(1);

    detail::SolveFlags solve_flags;
    auto* solve_cmd = app.add_subcommand("solve", "decide list 3-colorability");
    detail::add_solver_flags(solve_cmd, solve_flags);
    solve_cmd->add_option("--dump-cnf", solve_flags.dump_cnf_path,
                          "write the 2-SAT encoding of the reduced instance (DIMACS CNF)");

    detail::SolveFlags hom_flags;
    std::string hom_target;
    auto* hom_cmd = app.add_subcommand("hom", "decide list homomorphism into a target");
    detail::add_solver_flags(hom_cmd, hom_flags);
    hom_cmd->add_option("--target", hom_target, "named target (C5, PSTAR3, ...)");

    std::string oracle_file;
    std::string oracle_target;
    std::uint64_t oracle_cap = kDefaultOracleCap;
    int oracle_threads = 1;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth with solution count");
    oracle_cmd->add_option("file", oracle_file, "instance file ('-' or absent for stdin)");
    oracle_cmd->add_option("--target", oracle_target, "named target for homomorphism instances");
    oracle_cmd->add_option("--cap", oracle_cap, "refuse when the assignment space exceeds this");
    oracle_cmd->add_option("--threads", oracle_threads, "worker threads");

    std::string gen_family = "random-diam2";
    int gen_n = 10;
    std::uint64_t gen_seed = 0;
    double gen_edge_prob = -1.0;
    std::string gen_lists = "full";
    std::string gen_out_path;
    auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance");
    gen_cmd->add_option("--family", gen_family,
                        "universal-apex|random-diam2|random-diam3|cycle|petersen|custom");
    gen_cmd->add_option("--n", gen_n, "vertex count");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--edge-prob", gen_edge_prob, "edge probability (family default when unset)");
    gen_cmd->add_option("--lists", gen_lists, "full|random-nonempty|random-size-le2");
    gen_cmd->add_option("-o,--out", gen_out_path, "output file (stdout when absent)");

    std::string bench_family = "universal-apex";
    std::string bench_n_list = "50,100,200,300";
    int bench_reps = 3;
    std::uint64_t bench_seed = 0;
    std::string bench_mode = "baseline-ms";
    std::string bench_csv_path;
    int bench_threads = 1;
    double bench_edge_prob = -1.0;
    auto* bench_cmd = app.add_subcommand("bench", "timing/scaling runs with CSV output");
    bench_cmd->add_option("--family", bench_family, "instance family (as in gen)");
    bench_cmd->add_option("--n-list", bench_n_list, "comma-separated sizes");
    bench_cmd->add_option("--reps", bench_reps, "instances per size");
    bench_cmd->add_option("--seed", bench_seed, "base seed");
    bench_cmd->add_option("--mode", bench_mode, "solver mode");
    bench_cmd->add_option("--csv", bench_csv_path, "CSV output file (stdout when absent)");
    bench_cmd->add_option("--threads", bench_threads, "worker threads");
    bench_cmd->add_option("--edge-prob", bench_edge_prob, "edge probability");

    SweepConfig sweep_cfg;
    auto* sweep_cmd = app.add_subcommand("sweep", "differential test of all modes against the oracle");
    sweep_cmd->add_option("--max-n", sweep_cfg.exhaustive_max_n, "exhaustive graph size limit");
    sweep_cmd->add_option("--assignments", sweep_cfg.assignments_per_graph, "list assignments per graph");
    sweep_cmd->add_option("--rand-count", sweep_cfg.random_count, "random diameter-2 instances");
    sweep_cmd->add_option("--rand-n", sweep_cfg.random_n, "random instance size");
    sweep_cmd->add_option("--seed", sweep_cfg.seed, "seed");
    sweep_cmd->add_option("--threads", sweep_cfg.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitError;
    }

    try {
        if (solve_cmd->parsed()) {
            ParsedInstance parsed = parse_instance_text(detail::read_input(solve_flags.file, in));
            for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
            ColoringInstance inst = to_coloring_instance(parsed);
            if (!solve_flags.dump_cnf_path.empty()) {
                ColoringInstance reduced = inst;
                if (reduce_in_place(reduced) == ReduceStatus::Failure) {
                    err << "dump-cnf: propagation already fails; nothing to encode\n";
                } else {
                    bool small = true;
                    for (int v = 0; v < reduced.vertex_count(); ++v)
                        if (mask_size(reduced.list(v)) > 2) small = false;
                    if (!small) {
                        err << "dump-cnf: lists larger than 2 remain after propagation; no encoding dumped\n";
                    } else {
                        detail::write_output(solve_flags.dump_cnf_path,
                                             to_dimacs_cnf(edwards_encode(reduced).cnf), out);
                    }
                }
            }
            SearchOutcome outcome = solve(inst, solve_flags.config());
            out << detail::verdict_name(outcome.verdict) << "\n";
            if (outcome.sat()) {
                std::string line = detail::colors_line(*outcome.certificate);
                out << line << "\n";
                if (!solve_flags.cert_path.empty())
                    detail::write_output(solve_flags.cert_path, line + "\n", out);
            }
            if (solve_flags.stats) detail::print_stats(outcome.stats, out);
            return detail::verdict_exit(outcome.verdict);
        }

        if (hom_cmd->parsed()) {
            std::shared_ptr<const TargetGraph> target;
            std::optional<int> hint;
            if (!hom_target.empty()) {
                auto named = parse_target_name(hom_target);
                if (!named) throw std::runtime_error("unknown target '" + hom_target + "'");
                target = std::make_shared<const TargetGraph>(std::move(*named));
                hint = target->color_count();
            }
            ParsedInstance parsed = parse_instance_text(detail::read_input(hom_flags.file, in), hint);
            for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
            if (target && parsed.is_hom())
                err << "warning: --target overrides the file's target section\n";
            HomInstance inst = to_hom_instance(parsed, target);
            HomOutcome outcome = hom_solve(inst, hom_flags.config());
            out << detail::verdict_name(outcome.verdict) << "\n";
            if (outcome.sat()) {
                std::string line = detail::colors_line(*outcome.mapping, 1);
                out << line << "\n";
                if (!hom_flags.cert_path.empty())
                    detail::write_output(hom_flags.cert_path, line + "\n", out);
            }
            if (hom_flags.stats) detail::print_stats(outcome.stats, out);
            return detail::verdict_exit(outcome.verdict);
        }

        if (oracle_cmd->parsed()) {
            std::shared_ptr<const TargetGraph> target;
            std::optional<int> hint;
            if (!oracle_target.empty()) {
                auto named = parse_target_name(oracle_target);
                if (!named) throw std::runtime_error("unknown target '" + oracle_target + "'");
                target = std::make_shared<const TargetGraph>(std::move(*named));
                hint = target->color_count();
            }
            ParsedInstance parsed = parse_instance_text(detail::read_input(oracle_file, in), hint);
            for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
            OracleReport report;
            bool hom = target || parsed.is_hom();
            if (hom) {
                report = brute_hom(to_hom_instance(parsed, target), oracle_cap, oracle_threads);
            } else {
                report = brute_color(to_coloring_instance(parsed), oracle_cap, oracle_threads);
            }
            out << (report.sat ? "SAT" : "UNSAT") << "\n";
            out << "count=" << report.count << "\n";
            if (report.witness) out << "witness=" << detail::colors_line(*report.witness, hom ? 1 : 0) << "\n";
            return report.sat ? kExitSat : kExitUnsat;
        }

        if (gen_cmd->parsed()) {
            GenSpec spec;
            if (gen_family == "universal-apex") spec.family = GenFamily::UniversalApex;
            else if (gen_family == "random-diam2") spec.family = GenFamily::RandomDiam2;
            else if (gen_family == "random-diam3") spec.family = GenFamily::RandomDiam3;
            else if (gen_family == "cycle") spec.family = GenFamily::Cycle;
            else if (gen_family == "petersen") spec.family = GenFamily::Petersen;
            else if (gen_family == "custom") spec.family = GenFamily::CustomEdgeProb;
            else throw std::runtime_error("unknown family '" + gen_family + "'");
            spec.n = gen_n;
            spec.rng_seed = gen_seed;
            if (gen_edge_prob >= 0) spec.edge_prob = gen_edge_prob;
            if (gen_lists == "full") spec.list_mode = ListMode::Full;
            else if (gen_lists == "random-nonempty") spec.list_mode = ListMode::RandomNonempty;
            else if (gen_lists == "random-size-le2") spec.list_mode = ListMode::RandomSizeLe2;
            else throw std::runtime_error("unknown list mode '" + gen_lists + "'");
            detail::write_output(gen_out_path, serialize(generate(spec)), out);
            return 0;
        }

        if (bench_cmd->parsed()) {
            GenFamily family;
            if (bench_family == "universal-apex") family = GenFamily::UniversalApex;
            else if (bench_family == "random-diam2") family = GenFamily::RandomDiam2;
            else if (bench_family == "random-diam3") family = GenFamily::RandomDiam3;
            else if (bench_family == "cycle") family = GenFamily::Cycle;
            else if (bench_family == "petersen") family = GenFamily::Petersen;
            else if (bench_family == "custom") family = GenFamily::CustomEdgeProb;
            else throw std::runtime_error("unknown family '" + bench_family + "'");

            std::vector<int> sizes;
            std::stringstream ss(bench_n_list);
            for (std::string item; std::getline(ss, item, ',');) sizes.push_back(std::stoi(item));

            std::string csv = "family,n,seed,mode,verdict,nodes,b1,b2,b3,b4,ms\n";
            for (int n : sizes) {
                for (int rep = 0; rep < bench_reps; ++rep) {
                    GenSpec spec;
                    spec.family = family;
                    spec.n = n;
                    spec.rng_seed = bench_seed + static_cast<std::uint64_t>(rep);
                    if (bench_edge_prob >= 0) spec.edge_prob = bench_edge_prob;
                    ColoringInstance inst = generate(spec);
                    SolverConfig cfg;
                    cfg.mode = detail::parse_mode(bench_mode);
                    cfg.rng_seed = spec.rng_seed;
                    cfg.threads = bench_threads;
                    SearchOutcome outcome = solve(inst, cfg);
                    csv += bench_family + "," + std::to_string(n) + "," + std::to_string(spec.rng_seed) +
                           "," + bench_mode + "," + detail::verdict_name(outcome.verdict) + "," +
                           std::to_string(outcome.stats.nodes_expanded) + "," +
                           std::to_string(outcome.stats.b1) + "," + std::to_string(outcome.stats.b2) +
                           "," + std::to_string(outcome.stats.b3) + "," +
                           std::to_string(outcome.stats.b4) + "," +
                           std::to_string(outcome.stats.wall_time_ms) + "\n";
                }
            }
            detail::write_output(bench_csv_path, csv, out);
            return 0;
        }

        if (sweep_cmd->parsed()) {
            SweepReport report = differential_sweep(sweep_cfg);
            out << "instances_compared=" << report.instances_compared << "\n";
            out << "disagreements=" << report.disagreements.size() << "\n";
            for (const auto& d : report.disagreements) {
                out << "family=" << d.family << " mode=" << d.mode << " expected=" << d.expected
                    << " got=" << d.got << "\n";
                out << d.instance_text;
            }
            return report.clean() ? 0 : kExitError;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace tricolor

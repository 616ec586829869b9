#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricolor/detail/parallel.hpp"
#include "tricolor/gen.hpp"
#include "tricolor/homsolver.hpp"
#include "tricolor/instance.hpp"
#include "tricolor/io.hpp"
#include "tricolor/solver.hpp"

namespace tricolor {

class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultOracleCap = 3486784401ull;  // 3^20

/// Exhaustive ground truth. `witness` is the lexicographically first
/// solution (vertex ids ascending, colors ascending); `count` is exact.
struct OracleReport {
    bool sat = false;
    std::uint64_t count = 0;
    std::optional<std::vector<int>> witness;
    std::int64_t instances_compared = 0;  // filled by harness summaries only
};

namespace detail {

// Enumerates assignments drawn from per-vertex candidate color vectors in
// lexicographic order and counts the ones accepted by `proper`.
template <class ProperFn>
OracleReport enumerate_assignments(const std::vector<std::vector<int>>& choices, std::uint64_t cap,
                                   int threads, ProperFn proper) {
    OracleReport report;
    std::uint64_t total = 1;
    for (const auto& c : choices) {
        if (c.empty()) return report;  // empty list: zero solutions
        if (total > cap / c.size()) throw OracleCapExceeded("oracle: search space exceeds cap");
        total *= c.size();
    }
    const std::size_t n = choices.size();

    auto decode = [&](std::uint64_t idx) {
        std::vector<int> a(n);
        for (std::size_t v = n; v-- > 0;) {
            a[v] = choices[v][idx % choices[v].size()];
            idx /= choices[v].size();
        }
        return a;
    };

    auto chunk = [&](std::uint64_t begin, std::uint64_t end, ChunkResult& local) {
        if (begin >= end) return;
        std::vector<int> a = decode(begin);
        std::vector<std::size_t> digit(n);
        {
            std::uint64_t idx = begin;
            for (std::size_t v = n; v-- > 0;) {
                digit[v] = idx % choices[v].size();
                idx /= choices[v].size();
            }
        }
        for (std::uint64_t i = begin; i < end; ++i) {
            if (proper(a)) {
                ++local.count;
                if (local.first_index == kNoIndex) {
                    local.first_index = i;
                    local.first_payload = a;
                }
            }
            // odometer step
            for (std::size_t v = n; v-- > 0;) {
                if (++digit[v] < choices[v].size()) {
                    a[v] = choices[v][digit[v]];
                    break;
                }
                digit[v] = 0;
                a[v] = choices[v][0];
            }
        }
    };

    ChunkResult merged = run_chunked(total, threads, chunk);
    report.count = merged.count;
    report.sat = merged.count > 0;
    if (report.sat) report.witness = merged.first_payload;
    return report;
}

}  // namespace detail

/// Count/decide list 3-colorings by plain enumeration. Refuses (throws)
/// when the assignment space exceeds `cap`; an oracle never approximates.
inline OracleReport brute_color(const ColoringInstance& inst, std::uint64_t cap = kDefaultOracleCap,
                                int threads = 1) {
    const Graph& g = inst.graph();
    std::vector<std::vector<int>> choices(static_cast<std::size_t>(inst.vertex_count()));
    for (int v = 0; v < inst.vertex_count(); ++v)
        for (int c = 1; c <= 3; ++c)
            if (mask_has(inst.list(v), c)) choices[v].push_back(c);
    return detail::enumerate_assignments(choices, cap, threads, [&](const std::vector<int>& a) {
        for (int v = 0; v < inst.vertex_count(); ++v) {
            bool clash = false;
            g.neighbors(v).for_each([&](int u) {
                if (u > v && a[u] == a[v]) clash = true;
            });
            if (clash) return false;
        }
        return true;
    });
}

/// Count/decide list homomorphisms into the instance's target graph.
/// Witness colors are 0-based target vertex ids, like hom_solve's.
inline OracleReport brute_hom(const HomInstance& inst, std::uint64_t cap = kDefaultOracleCap,
                              int threads = 1) {
    const Graph& g = inst.graph();
    const Graph& h = inst.target().graph();
    std::vector<std::vector<int>> choices(static_cast<std::size_t>(inst.vertex_count()));
    for (int v = 0; v < inst.vertex_count(); ++v)
        for (int c = 0; c < inst.target().color_count(); ++c)
            if (hom_mask_has(inst.list(v), c)) choices[v].push_back(c);
    return detail::enumerate_assignments(choices, cap, threads, [&](const std::vector<int>& a) {
        for (int v = 0; v < inst.vertex_count(); ++v) {
            bool bad = false;
            g.neighbors(v).for_each([&](int u) {
                if (u > v && !h.adjacent(a[u], a[v])) bad = true;
            });
            if (bad) return false;
        }
        return true;
    });
}

/// Every labeled graph on n vertices whose edge set makes it connected,
/// enumerated by edge-subset bitmask (ascending).
inline std::vector<Graph> all_connected_graphs(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("all_connected_graphs: n must be in 1..6");
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
    std::vector<Graph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        GraphBuilder b(n);
        for (std::size_t i = 0; i < slots.size(); ++i)
            if ((mask >> i) & 1) b.add_edge(slots[i].first, slots[i].second);
        Graph g = b.build();
        if (is_connected(g)) out.push_back(std::move(g));
    }
    return out;
}

/// Uniform nonempty color lists, one of the 7 nonempty subsets of {1,2,3}.
inline std::vector<ColorMask> random_nonempty_lists(int n, std::mt19937_64& rng) {
    std::vector<ColorMask> lists(static_cast<std::size_t>(n));
    for (auto& m : lists) m = static_cast<ColorMask>(1 + rng() % 7);
    return lists;
}

struct SweepConfig {
    int exhaustive_max_n = 4;        // enumerate all connected graphs up to this size
    int assignments_per_graph = 5;   // seeded random list assignments per graph
    int random_count = 50;           // random diameter-2 instances
    int random_n = 10;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Disagreement {
    std::string family;
    std::string mode;
    std::string expected;
    std::string got;
    std::string instance_text;  // serialized minimized reproduction
};

struct SweepReport {
    std::int64_t instances_compared = 0;
    std::vector<Disagreement> disagreements;

    bool clean() const { return disagreements.empty(); }
};

namespace detail {

inline const char* mode_name(SolveMode m) {
    switch (m) {
        case SolveMode::Complete: return "complete";
        case SolveMode::Paper: return "paper";
        case SolveMode::Randomized: return "randomized";
        case SolveMode::BaselineMs: return "baseline-ms";
        case SolveMode::Diam3: return "diam3";
    }
    return "?";
}

inline bool mode_applicable(SolveMode m, std::optional<int> diam) {
    if (!diam) return false;
    switch (m) {
        case SolveMode::Complete: return true;
        case SolveMode::Paper:
        case SolveMode::Randomized:
        case SolveMode::BaselineMs: return *diam <= 2;
        case SolveMode::Diam3: return *diam <= 3;
    }
    return false;
}

// Greedily delete vertices while the solver/oracle disagreement survives.
inline ColoringInstance minimize_disagreement(ColoringInstance inst, SolveMode mode,
                                              const SolverConfig& base_cfg) {
    auto disagrees = [&](const ColoringInstance& candidate) {
        if (!is_connected(candidate.graph())) return false;
        auto diam = diameter(candidate.graph());
        if (!mode_applicable(mode, diam)) return false;
        SolverConfig cfg = base_cfg;
        cfg.mode = mode;
        bool solver_sat = solve(candidate, cfg).sat();
        bool oracle_sat = brute_color(candidate).sat;
        return solver_sat != oracle_sat;
    };
    bool shrunk = true;
    while (shrunk && inst.vertex_count() > 1) {
        shrunk = false;
        for (int drop = inst.vertex_count() - 1; drop >= 0; --drop) {
            VertexSet keep(inst.vertex_count());
            for (int v = 0; v < inst.vertex_count(); ++v)
                if (v != drop) keep.insert(v);
            InducedSubgraph sub = induced_subgraph(inst.graph(), keep);
            std::vector<ColorMask> lists;
            for (int v : sub.to_original) lists.push_back(inst.list(v));
            ColoringInstance candidate(std::make_shared<const Graph>(sub.graph), std::move(lists));
            if (disagrees(candidate)) {
                inst = std::move(candidate);
                shrunk = true;
                break;
            }
        }
    }
    return inst;
}

}  // namespace detail

/// Differential harness: runs every applicable solver mode against the
/// brute-force oracle over enumerated and random instance families.
/// Disagreements are report content, not errors; each carries a minimized
/// serialized reproduction.
inline SweepReport differential_sweep(const SweepConfig& config) {
    SweepReport report;
    const SolveMode kModes[] = {SolveMode::Complete, SolveMode::Paper, SolveMode::Randomized,
                                SolveMode::BaselineMs, SolveMode::Diam3};

    auto compare = [&](const ColoringInstance& inst, const std::string& family) {
        auto diam = diameter(inst.graph());
        OracleReport truth = brute_color(inst, kDefaultOracleCap, config.threads);
        for (SolveMode m : kModes) {
            if (!detail::mode_applicable(m, diam)) continue;
            SolverConfig cfg;
            cfg.mode = m;
            cfg.rng_seed = config.seed;
            cfg.threads = config.threads;
            SearchOutcome got = solve(inst, cfg);
            ++report.instances_compared;
            if (got.sat() != truth.sat) {
                ColoringInstance small = detail::minimize_disagreement(inst, m, cfg);
                report.disagreements.push_back(Disagreement{
                    family, detail::mode_name(m), truth.sat ? "SAT" : "UNSAT",
                    got.sat() ? "SAT" : "UNSAT", serialize(small)});
            }
        }
    };

    std::mt19937_64 rng(config.seed);
    for (int n = 1; n <= config.exhaustive_max_n; ++n) {
        for (const Graph& g : all_connected_graphs(n)) {
            auto shared = std::make_shared<const Graph>(g);
            for (int rep = 0; rep < config.assignments_per_graph; ++rep) {
                ColoringInstance inst(shared, random_nonempty_lists(n, rng));
                compare(inst, "exhaustive-n" + std::to_string(n));
            }
        }
    }
    for (int i = 0; i < config.random_count; ++i) {
        GenSpec spec;
        spec.family = GenFamily::RandomDiam2;
        spec.n = config.random_n;
        spec.rng_seed = config.seed + 1000 + static_cast<std::uint64_t>(i);
        spec.list_mode = ListMode::RandomNonempty;
        compare(generate(spec), "random-diam2");
    }
    return report;
}

}  // namespace tricolor

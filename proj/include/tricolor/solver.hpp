#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tricolor/detail/parallel.hpp"
#include "tricolor/instance.hpp"
#include "tricolor/twosat.hpp"

namespace tricolor {

enum class SolveMode { Complete, Paper, Randomized, BaselineMs, Diam3 };

struct SolverConfig {
    SolveMode mode = SolveMode::Complete;
    /// Scale factor of the witness-set size bound k_const * mu^{1/3} * ln(mu).
    /// Paper mode trusts it when pruning; Complete and Randomized never do.
    double k_const = 1.0;
    /// Max (S, S~) set pairs examined per node by the witness enumeration;
    /// hitting the cap triggers the complete fallback.
    std::int64_t witness_budget = 200000;
    std::uint64_t rng_seed = 0;
    int max_retries = 16;  // sampling attempts per node in Randomized mode
    std::optional<double> time_limit_seconds;
    int threads = 1;
    int phi_cap = 128;  // max colorings of S~ enumerated per sampled pair
};

struct SearchStats {
    std::int64_t nodes_expanded = 0;
    std::int64_t r1 = 0, r2 = 0, r3 = 0;
    std::int64_t b1 = 0, b2 = 0, b3 = 0, b4 = 0;
    std::int64_t witness_tuples_checked = 0;  // (S, S~) pairs through check_witness
    std::int64_t complete_fallbacks = 0;
    std::int64_t progress_violations = 0;  // stays 0; counted, never asserted away
    std::int64_t enumeration_assignments = 0;  // dominating-set / ball colorings tried
    std::int64_t deg_branches = 0;             // degree-branch firings (diam3 path)
    std::int64_t ball_enumerations = 0;        // dominating-ball firings (diam3 path)
    int max_depth = 0;
    double wall_time_ms = 0.0;
};

enum class Verdict { Sat, Unsat, Timeout };

struct SearchOutcome {
    Verdict verdict = Verdict::Unsat;
    std::optional<Coloring> certificate;
    SearchStats stats;

    bool sat() const { return verdict == Verdict::Sat; }
};

/// Branch descriptor of rule B4: fix color a on all of S and phi on S~.
struct WitnessTuple {
    int color_a = 1;
    VertexSet s, s_tilde;
    std::vector<std::pair<int, int>> phi;  // (vertex, color), vertex ids ascending
};

namespace detail {

// The three branching-rule scans and the domination count work purely on
// the graph plus the layer sets, so the homomorphism solver reuses them
// with its own layers.

inline std::optional<int> scan_b1(const Graph& g, const VertexSet& v1, const VertexSet& v3,
                                  std::int64_t mu) {
    const double threshold = std::pow(static_cast<double>(mu), 2.0 / 3.0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v1.contains(v)) continue;
        if (static_cast<double>((g.neighbors(v) & v3).count()) > threshold) return v;
    }
    return std::nullopt;
}

inline std::optional<int> scan_b2(const Graph& g, const VertexSet& v2, const VertexSet& v3,
                                  std::int64_t mu) {
    const double threshold = std::pow(static_cast<double>(mu), 2.0 / 3.0) / 36.0;
    for (int v = v3.first(); v >= 0; v = v3.next(v)) {
        VertexSet reach = g.neighbors(v);
        reach &= v2;
        int hits = 0;
        for (int u = v3.first(); u >= 0; u = v3.next(u)) {
            if (u == v) continue;
            if (reach.intersects(g.neighbors(u))) ++hits;
        }
        if (static_cast<double>(hits) >= threshold) return v;
    }
    return std::nullopt;
}

inline std::optional<std::pair<int, int>> scan_b3(const Graph& g, const VertexSet& v3, std::int64_t mu) {
    const double threshold = std::pow(static_cast<double>(mu), 2.0 / 3.0);
    for (int u = v3.first(); u >= 0; u = v3.next(u)) {
        for (int v = v3.next(u); v >= 0; v = v3.next(v)) {
            VertexSet common = g.neighbors(u);
            common &= g.neighbors(v);
            if (common.none()) continue;
            int hits = 0;
            for (int w = v3.first(); w >= 0; w = v3.next(w))
                if (common.intersects(g.neighbors(w))) ++hits;
            if (static_cast<double>(hits) >= threshold) return std::make_pair(u, v);
        }
    }
    return std::nullopt;
}

inline int domination_count(const Graph& g, const VertexSet& v3, const VertexSet& s, const VertexSet& st) {
    const int n = g.vertex_count();
    VertexSet ns(n), nst(n);
    s.for_each([&](int v) { ns |= g.neighbors(v); });
    ns -= s;
    st.for_each([&](int v) { nst |= g.neighbors(v); });
    nst -= st;
    VertexSet dominators = s;
    dominators |= st;
    dominators |= (ns & nst);
    VertexSet dominated = dominators;
    dominators.for_each([&](int v) { dominated |= g.neighbors(v); });
    dominated &= v3;
    return dominated.count();
}

}  // namespace detail

/// Rule B1: a vertex of V2 u V3 with more than mu^{2/3} neighbors in V3
/// (mu = |V3|), lowest id; branching fixes each color of its list in turn.
inline std::optional<int> rule_b1_candidate(const ColoringInstance& inst, const LayerStructure& ls) {
    return detail::scan_b1(inst.graph(), ls.v1, ls.v3, ls.measure_diam2);
}

/// Rule B2: a vertex v of V3 such that at least (1/36) mu^{2/3} other V3
/// vertices share a common neighbor with v inside V2.
inline std::optional<int> rule_b2_candidate(const ColoringInstance& inst, const LayerStructure& ls) {
    return detail::scan_b2(inst.graph(), ls.v2, ls.v3, ls.measure_diam2);
}

/// Rule B3: a pair u,v of V3 such that at least mu^{2/3} vertices w of V3
/// admit a vertex adjacent to u, v and w simultaneously.
inline std::optional<std::pair<int, int>> rule_b3_candidate(const ColoringInstance& inst,
                                                            const LayerStructure& ls) {
    return detail::scan_b3(inst.graph(), ls.v3, ls.measure_diam2);
}

/// Number of V3 vertices dominated by S u S~ u (N(S) n N(S~)), with all
/// neighborhoods taken in the whole graph. The branch on a tuple is taken
/// iff this count reaches ceil(mu/6).
inline int check_witness(const ColoringInstance& inst, const LayerStructure& ls, const WitnessTuple& w) {
    return detail::domination_count(inst.graph(), ls.v3, w.s, w.s_tilde);
}

/// Clamped sampling probabilities {p, p_tilde} for a measure mu:
/// p = mu^{-2/3}, p_tilde = min(1, 100 mu^{-1/3} ln mu).
inline std::pair<double, double> sampling_probabilities(std::int64_t mu) {
    if (mu <= 0) return {0.0, 0.0};
    double m = static_cast<double>(mu);
    double p = std::min(1.0, std::pow(m, -2.0 / 3.0));
    double p_tilde = std::min(1.0, 100.0 * std::pow(m, -1.0 / 3.0) * std::log(m));
    return {p, std::max(0.0, p_tilde)};
}

namespace detail {

// Stable uint64 -> [0,1) mapping, independent of the standard library's
// distribution implementations.
inline double rng_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int witness_size_bound(double k_const, std::int64_t mu) {
    if (mu <= 1) return 0;
    double m = static_cast<double>(mu);
    double bound = k_const * std::cbrt(m) * std::log(m);
    if (bound < 0) return 0;
    return static_cast<int>(bound);
}

inline std::int64_t domination_goal(std::int64_t mu) { return (mu + 5) / 6; }  // ceil(mu/6)

}  // namespace detail

struct WitnessEnumeration {
    bool truncated = false;           // budget ran out before the space was covered
    std::int64_t pairs_checked = 0;   // (S, S~) pairs put through check_witness
    std::int64_t accepted_pairs = 0;  // pairs meeting the domination goal
    std::int64_t tuples_emitted = 0;  // (a, S, S~, phi) branches handed to the visitor
};

/// Enumerates witness tuples in canonical order: S by size then
/// lexicographically, then S~ likewise, then the color a ascending, then
/// phi as an odometer over S~ (colors ascending). Only tuples whose sets
/// meet the domination goal are emitted. The visitor returns false to stop
/// early (e.g. when a branch proved SAT).
inline WitnessEnumeration for_each_witness(
    const ColoringInstance& inst, const LayerStructure& ls, const SolverConfig& cfg,
    const std::function<bool(const WitnessTuple&, int dominated)>& visit) {
    WitnessEnumeration result;
    const std::int64_t mu = ls.measure_diam2;
    if (mu == 0) return result;  // nothing to dominate, nothing to emit
    const int bound = detail::witness_size_bound(cfg.k_const, mu);
    const std::int64_t goal = detail::domination_goal(mu);
    const std::vector<int> pool = ls.v3.to_vector();
    const int n = inst.vertex_count();

    // next combination of `size` elements over `items`, in index space
    auto combinations = [](int universe, int size, const std::function<bool(const std::vector<int>&)>& f) {
        std::vector<int> idx(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
        if (size > universe) return true;
        while (true) {
            if (!f(idx)) return false;
            int i = size - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == universe - size + i) --i;
            if (i < 0) return true;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    };

    bool stopped = false;
    for (int s_size = 0; s_size <= bound && !stopped && !result.truncated; ++s_size) {
        combinations(static_cast<int>(pool.size()), s_size, [&](const std::vector<int>& s_idx) {
            VertexSet s(n);
            for (int i : s_idx) s.insert(pool[static_cast<std::size_t>(i)]);
            std::vector<int> rest;
            for (int v : pool)
                if (!s.contains(v)) rest.push_back(v);
            for (int t_size = 0; t_size <= bound && !stopped && !result.truncated; ++t_size) {
                combinations(static_cast<int>(rest.size()), t_size, [&](const std::vector<int>& t_idx) {
                    if (result.pairs_checked >= cfg.witness_budget) {
                        result.truncated = true;
                        return false;
                    }
                    ++result.pairs_checked;
                    WitnessTuple w;
                    w.s = s;
                    w.s_tilde = VertexSet(n);
                    std::vector<int> tilde_ids;
                    for (int i : t_idx) {
                        int v = rest[static_cast<std::size_t>(i)];
                        w.s_tilde.insert(v);
                        tilde_ids.push_back(v);
                    }
                    int dominated = check_witness(inst, ls, w);
                    if (dominated < goal) return true;
                    ++result.accepted_pairs;
                    for (int a = 1; a <= 3 && !stopped; ++a) {
                        w.color_a = a;
                        std::vector<int> others;
                        for (int c = 1; c <= 3; ++c)
                            if (c != a) others.push_back(c);
                        // phi odometer over tilde_ids
                        std::vector<std::size_t> digit(tilde_ids.size(), 0);
                        while (true) {
                            w.phi.clear();
                            for (std::size_t i = 0; i < tilde_ids.size(); ++i)
                                w.phi.emplace_back(tilde_ids[i], others[digit[i]]);
                            ++result.tuples_emitted;
                            if (!visit(w, dominated)) {
                                stopped = true;
                                break;
                            }
                            bool more = false;
                            for (std::size_t i = tilde_ids.size(); i-- > 0;) {
                                if (++digit[i] < others.size()) {
                                    more = true;
                                    break;
                                }
                                digit[i] = 0;
                            }
                            if (!more) break;
                        }
                    }
                    return !stopped;
                });
            }
            return !stopped && !result.truncated;
        });
    }
    return result;
}

/// One randomized attempt series at drawing an accepted witness tuple,
/// mirroring the probabilistic selection: pick v_a in V3 and a color a,
/// include each V3-neighbor of v_a (within G[V3]) in S~ with probability
/// p_tilde, include each remaining V3 vertex in S with probability p.
/// Returns the first accepted tuple within cfg.max_retries, else nullopt.
inline std::optional<WitnessTuple> sample_witness(const ColoringInstance& inst, const LayerStructure& ls,
                                                  const SolverConfig& cfg, std::mt19937_64& rng) {
    const std::int64_t mu = ls.measure_diam2;
    if (mu <= 0) return std::nullopt;
    const auto [p, p_tilde] = sampling_probabilities(mu);
    const std::int64_t goal = detail::domination_goal(mu);
    const int bound = detail::witness_size_bound(cfg.k_const, mu);
    const std::vector<int> pool = ls.v3.to_vector();
    const Graph& g = inst.graph();
    const int n = inst.vertex_count();

    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        int va = pool[static_cast<std::size_t>(rng() % pool.size())];
        int a = 1 + static_cast<int>(rng() % 3);
        WitnessTuple w;
        w.color_a = a;
        w.s_tilde = VertexSet(n);
        VertexSet v3_neighbors = g.neighbors(va);
        v3_neighbors &= ls.v3;
        std::vector<int> tilde_ids;
        v3_neighbors.for_each([&](int u) {
            if (detail::rng_unit(rng) < p_tilde) {
                w.s_tilde.insert(u);
                tilde_ids.push_back(u);
            }
        });
        w.s = VertexSet(n);
        for (int u : pool)
            if (!w.s_tilde.contains(u) && detail::rng_unit(rng) < p) w.s.insert(u);
        // oversized draws violate the tuple's size invariant; resample
        if (w.s.count() > bound || static_cast<int>(tilde_ids.size()) > bound) continue;
        if (check_witness(inst, ls, w) < goal) continue;
        // The domination check does not depend on phi; return the first
        // coloring of S~ in canonical order (all entries the smallest
        // color distinct from a). phi_cap limits nothing here but keeps
        // the enumerated-space contract shared with the dive branching.
        int fill = (a == 1) ? 2 : 1;
        for (int u : tilde_ids) w.phi.emplace_back(u, fill);
        return w;
    }
    return std::nullopt;
}

namespace detail {

struct TimeoutSignal {};

struct SearchContext {
    const SolverConfig& cfg;
    SearchStats& stats;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::mt19937_64 rng;

    void tick() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline) throw TimeoutSignal{};
    }
};

inline bool reduce_child(ColoringInstance& child, SearchContext& ctx) {
    if (reduce_in_place(child, &ctx.stats.r1) == ReduceStatus::Failure) {
        ++ctx.stats.r2;
        return false;
    }
    return true;
}

using NodeResult = std::optional<Coloring>;

inline NodeResult solve_node(ColoringInstance inst, SearchContext& ctx, int depth, bool already_reduced);

// Branch on every color of v's list, in ascending order.
inline NodeResult branch_on_vertex(const ColoringInstance& inst, int v, SearchContext& ctx, int depth,
                                   double required_progress, std::int64_t mu_before) {
    for (int a = 1; a <= 3; ++a) {
        if (!mask_has(inst.list(v), a)) continue;
        ColoringInstance child = inst;
        child.set_list(v, color_bit(a));
        if (!reduce_child(child, ctx)) continue;
        if (required_progress >= 0) {
            std::int64_t mu_after = layers(child).measure_diam2;
            if (static_cast<double>(mu_before - mu_after) <= required_progress)
                ++ctx.stats.progress_violations;
        }
        NodeResult r = solve_node(std::move(child), ctx, depth + 1, true);
        if (r) return r;
    }
    return std::nullopt;
}

// Complete branching step: three-way split on the lowest-id V3 vertex.
inline NodeResult complete_branch(const ColoringInstance& inst, const LayerStructure& ls,
                                  SearchContext& ctx, int depth) {
    return branch_on_vertex(inst, ls.v3.first(), ctx, depth, -1.0, 0);
}

// B4 branch: fix a on S and phi on S~; surviving children must shed at
// least ceil(mu/6) size-3 lists.
inline NodeResult branch_on_tuple(const ColoringInstance& inst, const WitnessTuple& w, SearchContext& ctx,
                                  int depth, std::int64_t mu_before) {
    ColoringInstance child = inst;
    bool consistent = true;
    w.s.for_each([&](int v) {
        if (!mask_has(child.list(v), w.color_a)) consistent = false;
        child.set_list(v, color_bit(w.color_a));
    });
    for (auto [v, c] : w.phi) {
        if (!mask_has(child.list(v), c)) consistent = false;
        child.set_list(v, color_bit(c));
    }
    if (!consistent) return std::nullopt;
    if (!reduce_child(child, ctx)) return std::nullopt;
    std::int64_t mu_after = layers(child).measure_diam2;
    if (mu_before - mu_after < domination_goal(mu_before)) ++ctx.stats.progress_violations;
    return solve_node(std::move(child), ctx, depth + 1, true);
}

inline NodeResult branch_b3(const ColoringInstance& inst, std::pair<int, int> pair, SearchContext& ctx,
                            int depth) {
    auto [u, v] = pair;
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            if (a == b) continue;
            ColoringInstance child = inst;
            child.set_list(u, color_bit(a));
            child.set_list(v, color_bit(b));
            if (!reduce_child(child, ctx)) continue;
            NodeResult r = solve_node(std::move(child), ctx, depth + 1, true);
            if (r) return r;
        }
    }
    // Same-color branch: merge u and v. Skipped when they are adjacent
    // (the merged vertex would need a loop; that branch is infeasible).
    if (!inst.graph().adjacent(u, v)) {
        Contraction con = contract_pair(inst.graph(), u, v);
        auto graph = std::make_shared<const Graph>(std::move(con.graph));
        std::vector<ColorMask> lists(static_cast<std::size_t>(graph->vertex_count()), 0);
        for (int w = 0; w < inst.vertex_count(); ++w) lists[static_cast<std::size_t>(con.to_contracted[w])] = inst.list(w);
        lists[static_cast<std::size_t>(con.merged_vertex)] = kFullList;
        ColoringInstance child(graph, std::move(lists));
        if (reduce_child(child, ctx)) {
            NodeResult r = solve_node(std::move(child), ctx, depth + 1, true);
            if (r) {
                Coloring lifted(static_cast<std::size_t>(inst.vertex_count()));
                for (int w = 0; w < inst.vertex_count(); ++w)
                    lifted[static_cast<std::size_t>(w)] = (*r)[static_cast<std::size_t>(con.to_contracted[w])];
                return lifted;
            }
        }
    }
    return std::nullopt;
}

inline NodeResult solve_node(ColoringInstance inst, SearchContext& ctx, int depth, bool already_reduced) {
    ctx.tick();
    ++ctx.stats.nodes_expanded;
    if (depth > ctx.stats.max_depth) ctx.stats.max_depth = depth;

    if (!already_reduced && !reduce_child(inst, ctx)) return std::nullopt;
    LayerStructure ls = layers(inst);
    if (ls.v3.none()) {
        ++ctx.stats.r3;
        return finish_two_lists(inst);
    }
    if (ctx.cfg.mode == SolveMode::Complete) return complete_branch(inst, ls, ctx, depth);

    const std::int64_t mu = ls.measure_diam2;
    if (auto v = rule_b1_candidate(inst, ls)) {
        ++ctx.stats.b1;
        double threshold = std::pow(static_cast<double>(mu), 2.0 / 3.0);
        return branch_on_vertex(inst, *v, ctx, depth, threshold, mu);
    }
    if (auto v = rule_b2_candidate(inst, ls)) {
        ++ctx.stats.b2;
        return branch_on_vertex(inst, *v, ctx, depth, -1.0, 0);
    }
    if (auto pair = rule_b3_candidate(inst, ls)) {
        ++ctx.stats.b3;
        return branch_b3(inst, *pair, ctx, depth);
    }

    if (ctx.cfg.mode == SolveMode::Randomized) {
        if (auto w = sample_witness(inst, ls, ctx.cfg, ctx.rng)) {
            ++ctx.stats.b4;
            // Speculative dive: try every coloring of S~ for the sampled
            // sets (bounded by phi_cap), not just the sampled phi.
            std::vector<int> tilde_ids = w->s_tilde.to_vector();
            std::vector<int> others;
            int emitted = 0;
            for (int c = 1; c <= 3; ++c)
                if (c != w->color_a) others.push_back(c);
            std::vector<std::size_t> digit(tilde_ids.size(), 0);
            while (emitted < ctx.cfg.phi_cap) {
                WitnessTuple t = *w;
                t.phi.clear();
                for (std::size_t i = 0; i < tilde_ids.size(); ++i)
                    t.phi.emplace_back(tilde_ids[i], others[digit[i]]);
                ++emitted;
                NodeResult r = branch_on_tuple(inst, t, ctx, depth, mu);
                if (r) return r;
                bool more = false;
                for (std::size_t i = tilde_ids.size(); i-- > 0;) {
                    if (++digit[i] < others.size()) {
                        more = true;
                        break;
                    }
                    digit[i] = 0;
                }
                if (!more) break;
            }
        }
        // Correctness never rests on the sample; re-cover the whole space.
        ++ctx.stats.complete_fallbacks;
        return complete_branch(inst, ls, ctx, depth);
    }

    // Paper mode: enumerate witness tuples; branch on each accepted one.
    NodeResult sat_result;
    WitnessEnumeration senum = for_each_witness(inst, ls, ctx.cfg, [&](const WitnessTuple& w, int) {
        ++ctx.stats.b4;
        NodeResult r = branch_on_tuple(inst, w, ctx, depth, mu);
        if (r) {
            sat_result = std::move(r);
            return false;
        }
        return true;
    });
    ctx.stats.witness_tuples_checked += senum.pairs_checked;
    if (sat_result) return sat_result;
    if (senum.accepted_pairs == 0 || senum.truncated) {
        // Nothing usable within the size bound (or the budget ran out):
        // the enumeration proves nothing, so fall back to plain branching.
        ++ctx.stats.complete_fallbacks;
        return complete_branch(inst, ls, ctx, depth);
    }
    // Accepted branches existed and all failed; trust the size bound.
    return std::nullopt;
}

inline SearchOutcome finish_outcome(NodeResult r, SearchStats stats,
                                    std::chrono::steady_clock::time_point started) {
    SearchOutcome out;
    out.stats = std::move(stats);
    if (r) {
        out.verdict = Verdict::Sat;
        out.certificate = std::move(*r);
    } else {
        out.verdict = Verdict::Unsat;
    }
    out.stats.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return out;
}

inline std::optional<std::chrono::steady_clock::time_point> make_deadline(const SolverConfig& cfg) {
    if (!cfg.time_limit_seconds) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
               std::chrono::duration<double>(*cfg.time_limit_seconds));
}

}  // namespace detail

/// Dominating-set baseline for diameter <= 2: take the smaller of N(v) for
/// a minimum-degree v and a greedy dominating set, enumerate its list
/// colorings, and finish each reduced branch with the 2-SAT step.
inline SearchOutcome solve_ms_baseline(const ColoringInstance& inst, const SolverConfig& cfg) {
    auto started = std::chrono::steady_clock::now();
    SearchStats stats;
    auto diam = diameter(inst.graph());
    if (!diam || *diam > 2) throw std::invalid_argument("solve_ms_baseline: graph diameter must be <= 2");

    ColoringInstance base = inst;
    if (reduce_in_place(base, &stats.r1) == ReduceStatus::Failure) {
        ++stats.r2;
        return detail::finish_outcome(std::nullopt, std::move(stats), started);
    }
    LayerStructure ls = layers(base);
    if (ls.v3.none()) {
        ++stats.r3;
        return detail::finish_outcome(finish_two_lists(base), std::move(stats), started);
    }
    const Graph& g = base.graph();
    const int n = base.vertex_count();

    // Candidate 1: open neighborhood of a minimum-degree vertex.
    int vmin = 0;
    for (int v = 1; v < n; ++v)
        if (g.degree(v) < g.degree(vmin)) vmin = v;
    std::vector<int> set_a = g.neighbors(vmin).to_vector();

    // Candidate 2: greedy cover by closed neighborhoods.
    std::vector<int> set_b;
    {
        VertexSet uncovered = g.all_vertices();
        while (uncovered.any()) {
            int best = -1, best_gain = -1;
            for (int v = 0; v < n; ++v) {
                VertexSet closed = g.neighbors(v);
                closed.insert(v);
                closed &= uncovered;
                int gain = closed.count();
                if (gain > best_gain) {
                    best_gain = gain;
                    best = v;
                }
            }
            set_b.push_back(best);
            VertexSet closed = g.neighbors(best);
            closed.insert(best);
            uncovered -= closed;
        }
    }
    const std::vector<int>& dom = set_a.size() <= set_b.size() && !set_a.empty() ? set_a : set_b;

    std::vector<std::vector<int>> choices;
    for (int v : dom) {
        std::vector<int> cs;
        for (int c = 1; c <= 3; ++c)
            if (mask_has(base.list(v), c)) cs.push_back(c);
        choices.push_back(std::move(cs));
    }
    std::uint64_t total = 1;
    for (const auto& c : choices) total *= static_cast<std::uint64_t>(c.size());

    auto deadline = detail::make_deadline(cfg);
    std::atomic<bool> timed_out{false};
    auto probe = [&](std::uint64_t idx) -> std::optional<Coloring> {
        if (deadline && std::chrono::steady_clock::now() > *deadline) {
            timed_out.store(true, std::memory_order_relaxed);
            return std::nullopt;
        }
        ColoringInstance child = base;
        std::uint64_t rest = idx;
        for (std::size_t i = dom.size(); i-- > 0;) {
            const auto& cs = choices[i];
            child.set_list(dom[i], color_bit(cs[rest % cs.size()]));
            rest /= cs.size();
        }
        if (reduce_in_place(child) == ReduceStatus::Failure) return std::nullopt;
        // dom dominates every vertex, so all lists are now of size <= 2
        return finish_two_lists(child);
    };
    auto found = detail::find_first_index<Coloring>(total, cfg.threads, probe);
    stats.enumeration_assignments = found ? static_cast<std::int64_t>(found->first) + 1
                                          : static_cast<std::int64_t>(total);
    stats.nodes_expanded = stats.enumeration_assignments;
    if (!found && timed_out.load()) {
        SearchOutcome out;
        out.verdict = Verdict::Timeout;
        out.stats = std::move(stats);
        out.stats.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return out;
    }
    return detail::finish_outcome(found ? std::optional<Coloring>(std::move(found->second)) : std::nullopt,
                                  std::move(stats), started);
}

/// Degree branching plus dominating-ball enumeration; decides instances of
/// diameter at most 3.
inline SearchOutcome solve_diam3(const ColoringInstance& inst, const SolverConfig& cfg) {
    auto started = std::chrono::steady_clock::now();
    SearchStats stats;
    auto diam = diameter(inst.graph());
    if (!diam || *diam > 3) throw std::invalid_argument("solve_diam3: graph diameter must be <= 3");
    const int d_eff = std::max(2, *diam);
    auto deadline = detail::make_deadline(cfg);

    struct Rec {
        const SolverConfig& cfg;
        SearchStats& stats;
        int d_eff;
        std::optional<std::chrono::steady_clock::time_point> deadline;

        std::optional<Coloring> run(ColoringInstance node, bool already_reduced, int depth) {
            if (deadline && std::chrono::steady_clock::now() > *deadline) throw detail::TimeoutSignal{};
            ++stats.nodes_expanded;
            if (depth > stats.max_depth) stats.max_depth = depth;
            if (!already_reduced) {
                if (reduce_in_place(node, &stats.r1) == ReduceStatus::Failure) {
                    ++stats.r2;
                    return std::nullopt;
                }
            }
            LayerStructure ls = layers(node);
            if (ls.v3.none()) {
                ++stats.r3;
                return finish_two_lists(node);
            }
            const Graph& g = node.graph();
            VertexSet active = ls.v2;
            active |= ls.v3;
            double mu3 = static_cast<double>(ls.measure_diam3);
            double threshold = std::pow(mu3 * std::log(mu3), 1.0 / d_eff);

            // pick the active vertex with the most active neighbors
            int best = -1, best_deg = -1;
            for (int v = active.first(); v >= 0; v = active.next(v)) {
                int deg = (g.neighbors(v) & active).count();
                if (deg > best_deg) {
                    best_deg = deg;
                    best = v;
                }
            }
            if (static_cast<double>(best_deg) >= threshold) {
                ++stats.deg_branches;
                // group the active neighbors of best by list; the largest
                // group shares a color with L(best)
                VertexSet nb = g.neighbors(best);
                nb &= active;
                int counts[8] = {0};
                nb.for_each([&](int u) { ++counts[node.list(u)]; });
                ColorMask group = 0;
                int group_count = -1;
                for (ColorMask m = 0; m <= kFullList; ++m) {
                    if (mask_size(m) >= 2 && counts[m] > group_count) {
                        group_count = counts[m];
                        group = m;
                    }
                }
                ColorMask both = static_cast<ColorMask>(group & node.list(best));
                int a = lowest_color(both);  // two size->=2 subsets of {1,2,3} always meet
                {
                    ColoringInstance child = node;
                    child.set_list(best, color_bit(a));
                    if (reduce_in_place(child, &stats.r1) == ReduceStatus::Reduced) {
                        auto r = run(std::move(child), true, depth + 1);
                        if (r) return r;
                    } else {
                        ++stats.r2;
                    }
                }
                {
                    ColoringInstance child = node;
                    child.set_list(best, static_cast<ColorMask>(node.list(best) & ~color_bit(a)));
                    if (reduce_in_place(child, &stats.r1) == ReduceStatus::Reduced) {
                        auto r = run(std::move(child), true, depth + 1);
                        if (r) return r;
                    } else {
                        ++stats.r2;
                    }
                }
                return std::nullopt;
            }

            // Dominating ball: color N^{<= d-1}[v] within G[V2 u V3] for the
            // lowest-id V3 vertex v; every branch then reduces to lists of
            // size <= 2.
            ++stats.ball_enumerations;
            InducedSubgraph sub = induced_subgraph(g, active);
            int v = ls.v3.first();
            VertexSet ball_sub = ball(sub.graph, sub.from_original[v], d_eff - 1, true);
            std::vector<int> x;
            ball_sub.for_each([&](int sv) { x.push_back(sub.to_original[sv]); });

            std::vector<std::vector<int>> choices;
            std::uint64_t total = 1;
            for (int xv : x) {
                std::vector<int> cs;
                for (int c = 1; c <= 3; ++c)
                    if (mask_has(node.list(xv), c)) cs.push_back(c);
                total *= cs.size();
                choices.push_back(std::move(cs));
            }
            auto probe = [&](std::uint64_t idx) -> std::optional<Coloring> {
                ColoringInstance child = node;
                std::uint64_t rest = idx;
                for (std::size_t i = x.size(); i-- > 0;) {
                    const auto& cs = choices[i];
                    child.set_list(x[i], color_bit(cs[rest % cs.size()]));
                    rest /= cs.size();
                }
                if (reduce_in_place(child) == ReduceStatus::Failure) return std::nullopt;
                return finish_two_lists(child);
            };
            auto found = detail::find_first_index<Coloring>(total, cfg.threads, probe);
            stats.enumeration_assignments +=
                found ? static_cast<std::int64_t>(found->first) + 1 : static_cast<std::int64_t>(total);
            if (found) return std::move(found->second);
            return std::nullopt;
        }
    };

    Rec rec{cfg, stats, d_eff, deadline};
    try {
        auto r = rec.run(inst, false, 0);
        return detail::finish_outcome(std::move(r), std::move(stats), started);
    } catch (const detail::TimeoutSignal&) {
        SearchOutcome out;
        out.verdict = Verdict::Timeout;
        out.stats = std::move(stats);
        out.stats.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return out;
    }
}

/// Front door. Complete mode works on any connected instance; Paper and
/// Randomized require diameter <= 2, BaselineMs <= 2, Diam3 <= 3. Every
/// SAT certificate is verified before being returned.
inline SearchOutcome solve(const ColoringInstance& inst, const SolverConfig& cfg) {
    if (!is_connected(inst.graph())) throw std::invalid_argument("solve: graph must be connected");

    SearchOutcome out;
    if (cfg.mode == SolveMode::BaselineMs) {
        out = solve_ms_baseline(inst, cfg);
    } else if (cfg.mode == SolveMode::Diam3) {
        out = solve_diam3(inst, cfg);
    } else {
        if (cfg.mode != SolveMode::Complete) {
            auto diam = diameter(inst.graph());
            if (!diam || *diam > 2)
                throw std::invalid_argument("solve: this mode requires diameter <= 2");
        }
        auto started = std::chrono::steady_clock::now();
        SearchStats stats;
        detail::SearchContext ctx{cfg, stats, detail::make_deadline(cfg), std::mt19937_64(cfg.rng_seed)};
        try {
            auto r = detail::solve_node(inst, ctx, 0, false);
            out = detail::finish_outcome(std::move(r), std::move(stats), started);
        } catch (const detail::TimeoutSignal&) {
            out.verdict = Verdict::Timeout;
            out.stats = std::move(stats);
            out.stats.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                    .count();
        }
    }
    if (out.verdict == Verdict::Sat) {
        if (!out.certificate || !verify(inst, *out.certificate))
            throw std::logic_error("solve: produced an invalid certificate");
    }
    return out;
}

}  // namespace tricolor

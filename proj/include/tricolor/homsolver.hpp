#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tricolor/solver.hpp"

namespace tricolor {

/// Color lists over the vertices of a homomorphism target: bit c stands
/// for target vertex c. Targets are capped at 64 vertices.
using HomMask = std::uint64_t;

inline constexpr HomMask hom_bit(int c) { return HomMask{1} << c; }
inline int hom_mask_size(HomMask m) { return std::popcount(m); }
inline bool hom_mask_has(HomMask m, int c) { return (m >> c) & 1u; }
inline int hom_lowest(HomMask m) { return std::countr_zero(m); }

struct TargetProperties {
    bool p1 = false;  // every vertex has at most two neighbors (a loop counts itself)
    bool p2 = false;  // any two distinct vertices share at most one common neighbor
    bool p3 = false;  // no loops
};

inline TargetProperties check_properties(const Graph& h) {
    TargetProperties out{true, true, true};
    for (int v = 0; v < h.vertex_count(); ++v) {
        if (h.degree(v) > 2) out.p1 = false;
        if (h.has_loop(v)) out.p3 = false;
        for (int u = v + 1; u < h.vertex_count(); ++u) {
            VertexSet common = h.neighbors(v);
            common &= h.neighbors(u);
            if (common.count() > 1) out.p2 = false;
        }
    }
    return out;
}

/// A homomorphism target: a small graph (loops allowed) whose vertices act
/// as colors, with its property flags cached.
class TargetGraph {
public:
    TargetGraph(Graph h, std::string name) : graph_(std::move(h)), name_(std::move(name)) {
        if (graph_.vertex_count() < 1) throw std::invalid_argument("TargetGraph: empty target");
        if (graph_.vertex_count() > 64) throw std::invalid_argument("TargetGraph: more than 64 colors");
        props_ = check_properties(graph_);
        neighbor_masks_.resize(static_cast<std::size_t>(graph_.vertex_count()), 0);
        for (int c = 0; c < graph_.vertex_count(); ++c)
            graph_.neighbors(c).for_each([&](int d) { neighbor_masks_[static_cast<std::size_t>(c)] |= hom_bit(d); });
    }

    /// C_k, the k-cycle (k >= 3).
    static TargetGraph cycle(int k) {
        if (k < 3) throw std::invalid_argument("TargetGraph::cycle: k must be >= 3");
        GraphBuilder b(k, true);
        for (int i = 0; i < k; ++i) b.add_edge(i, (i + 1) % k);
        return TargetGraph(b.build(), "C" + std::to_string(k));
    }

    /// P*_k, the k-vertex path with loops on both endvertices (k >= 3).
    static TargetGraph looped_path(int k) {
        if (k < 3) throw std::invalid_argument("TargetGraph::looped_path: k must be >= 3");
        GraphBuilder b(k, true);
        for (int i = 0; i + 1 < k; ++i) b.add_edge(i, i + 1);
        b.add_edge(0, 0);
        b.add_edge(k - 1, k - 1);
        return TargetGraph(b.build(), "PSTAR" + std::to_string(k));
    }

    const Graph& graph() const { return graph_; }
    const std::string& name() const { return name_; }
    int color_count() const { return graph_.vertex_count(); }
    bool p1() const { return props_.p1; }
    bool p2() const { return props_.p2; }
    bool p3() const { return props_.p3; }
    const TargetProperties& properties() const { return props_; }

    bool adjacent(int a, int b) const { return graph_.adjacent(a, b); }
    HomMask neighbor_mask(int c) const { return neighbor_masks_[static_cast<std::size_t>(check(c))]; }
    HomMask full_mask() const {
        return color_count() == 64 ? ~HomMask{0} : (hom_bit(color_count()) - 1);
    }

private:
    int check(int c) const {
        if (c < 0 || c >= color_count()) throw std::invalid_argument("TargetGraph: color out of range");
        return c;
    }

    Graph graph_;
    std::string name_;
    TargetProperties props_;
    std::vector<HomMask> neighbor_masks_;
};

/// Mapping of instance vertices to target vertices (0-based color ids).
using HomMapping = std::vector<int>;

class HomInstance {
public:
    HomInstance(std::shared_ptr<const Graph> graph, std::vector<HomMask> lists,
                std::shared_ptr<const TargetGraph> target)
        : graph_(std::move(graph)), lists_(std::move(lists)), target_(std::move(target)) {
        if (!graph_ || !target_) throw std::invalid_argument("HomInstance: null graph or target");
        if (graph_->allows_loops()) throw std::invalid_argument("HomInstance: instance graph must be loopless");
        if (static_cast<int>(lists_.size()) != graph_->vertex_count())
            throw std::invalid_argument("HomInstance: list count mismatch");
        for (HomMask m : lists_)
            if (m & ~target_->full_mask())
                throw std::invalid_argument("HomInstance: list not a subset of the target's vertices");
    }

    static HomInstance with_full_lists(std::shared_ptr<const Graph> graph,
                                       std::shared_ptr<const TargetGraph> target) {
        std::vector<HomMask> lists(static_cast<std::size_t>(graph->vertex_count()), target->full_mask());
        return HomInstance(std::move(graph), std::move(lists), std::move(target));
    }

    const Graph& graph() const { return *graph_; }
    const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
    const TargetGraph& target() const { return *target_; }
    const std::shared_ptr<const TargetGraph>& target_ptr() const { return target_; }
    int vertex_count() const { return graph_->vertex_count(); }

    HomMask list(int v) const { return lists_[check(v)]; }
    void set_list(int v, HomMask m) {
        if (m & ~target_->full_mask()) throw std::invalid_argument("set_list: list not a subset of the target");
        lists_[check(v)] = m;
    }

private:
    int check(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::invalid_argument("HomInstance: vertex id out of range");
        return v;
    }

    std::shared_ptr<const Graph> graph_;
    std::vector<HomMask> lists_;
    std::shared_ptr<const TargetGraph> target_;
};

/// Edges must map to edges of the target (loops allowed) and every vertex
/// to a color on its list.
inline bool verify_hom(const HomInstance& inst, const HomMapping& m) {
    if (static_cast<int>(m.size()) != inst.vertex_count())
        throw std::invalid_argument("verify_hom: mapping size mismatch");
    const Graph& g = inst.graph();
    const Graph& h = inst.target().graph();
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (m[v] < 0 || m[v] >= inst.target().color_count()) return false;
        if (!hom_mask_has(inst.list(v), m[v])) return false;
    }
    for (int v = 0; v < inst.vertex_count(); ++v) {
        bool bad = false;
        g.neighbors(v).for_each([&](int u) {
            if (u > v && !h.adjacent(m[u], m[v])) bad = true;
        });
        if (bad) return false;
    }
    return true;
}

/// Propagation to fixpoint: a vertex forced to color c restricts every
/// neighbor's list to the target neighborhood of c (size <= 2 under p1).
/// Requires p1; Failure exactly when a list empties.
inline ReduceStatus hom_reduce_in_place(HomInstance& inst, std::int64_t* r1_firings = nullptr) {
    if (!inst.target().p1()) throw std::logic_error("hom_reduce: target must satisfy p1");
    const Graph& g = inst.graph();
    std::deque<int> queue;
    std::vector<char> queued(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (int v = 0; v < inst.vertex_count(); ++v) {
        int size = hom_mask_size(inst.list(v));
        if (size == 0) return ReduceStatus::Failure;
        if (size == 1) {
            queue.push_back(v);
            queued[v] = 1;
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        HomMask allowed = inst.target().neighbor_mask(hom_lowest(inst.list(v)));
        if (r1_firings) ++*r1_firings;
        bool failed = false;
        g.neighbors(v).for_each([&](int u) {
            if (failed) return;
            HomMask lu = inst.list(u);
            HomMask updated = lu & allowed;
            if (updated == lu) return;
            inst.set_list(u, updated);
            if (updated == 0) {
                failed = true;
            } else if (hom_mask_size(updated) == 1 && !queued[u]) {
                queue.push_back(u);
                queued[u] = 1;
            }
        });
        if (failed) return ReduceStatus::Failure;
    }
    return ReduceStatus::Reduced;
}

inline std::optional<HomInstance> hom_reduce(HomInstance inst) {
    if (hom_reduce_in_place(inst) == ReduceStatus::Failure) return std::nullopt;
    return inst;
}

/// 2-SAT finish for lists of size <= 2: one variable per size-2 vertex,
/// one clause per edge and per color pair that is not an edge of the
/// target. Certificates are verified before being returned.
inline std::optional<HomMapping> hom_two_lists(const HomInstance& inst) {
    const int n = inst.vertex_count();
    std::vector<int> var_of(static_cast<std::size_t>(n), -1);
    std::vector<std::array<int, 2>> choice(static_cast<std::size_t>(n), {0, 0});
    TwoCnf cnf;
    for (int v = 0; v < n; ++v) {
        HomMask m = inst.list(v);
        int size = hom_mask_size(m);
        if (size > 2) throw std::logic_error("hom_two_lists: vertex with a list of size > 2");
        if (size == 0) return std::nullopt;
        int lo = hom_lowest(m);
        if (size == 1) {
            choice[v] = {lo, lo};
        } else {
            int hi = hom_lowest(m & ~hom_bit(lo));
            choice[v] = {lo, hi};
            var_of[v] = cnf.variable_count++;
        }
    }
    const Graph& g = inst.graph();
    const TargetGraph& t = inst.target();
    bool infeasible = false;
    for (int u = 0; u < n && !infeasible; ++u) {
        g.neighbors(u).for_each([&](int v) {
            if (v <= u || infeasible) return;
            for (int iu = 0; iu < (var_of[u] < 0 ? 1 : 2); ++iu) {
                for (int iv = 0; iv < (var_of[v] < 0 ? 1 : 2); ++iv) {
                    if (t.adjacent(choice[u][iu], choice[v][iv])) continue;
                    if (var_of[u] < 0 && var_of[v] < 0) {
                        infeasible = true;
                    } else if (var_of[u] < 0) {
                        cnf.add_unit(Literal{var_of[v], iv == 1});
                    } else if (var_of[v] < 0) {
                        cnf.add_unit(Literal{var_of[u], iu == 1});
                    } else {
                        cnf.add_clause(Literal{var_of[u], iu == 1}, Literal{var_of[v], iv == 1});
                    }
                }
            }
        });
    }
    if (infeasible) return std::nullopt;
    auto model = solve_2sat(cnf);
    if (!model) return std::nullopt;
    HomMapping m(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        m[v] = var_of[v] < 0 ? choice[v][0] : choice[v][(*model)[static_cast<std::size_t>(var_of[v])] ? 1 : 0];
    if (!verify_hom(inst, m)) throw std::logic_error("hom_two_lists: produced an invalid mapping");
    return m;
}

struct HomSplitBranch {
    HomInstance instance;
    std::vector<int> color_to_parent;  // sub-target color id -> parent color id
};

/// When two target colors sit farther apart in the target than the
/// instance graph's diameter, no mapping uses both; split into two
/// subinstances, each dropping one of the colors. Empty result means the
/// instance is unchanged (no such pair).
inline std::vector<HomSplitBranch> distance_split(const HomInstance& inst) {
    auto diam_g = diameter(inst.graph());
    if (!diam_g) throw std::invalid_argument("distance_split: instance graph must be connected");
    const Graph& h = inst.target().graph();
    const int k = h.vertex_count();
    int found_x = -1, found_y = -1;
    for (int x = 0; x < k && found_x < 0; ++x) {
        auto dist = bfs_distances(h, x);
        for (int y = x + 1; y < k; ++y) {
            if (dist[y] == kUnreachable || dist[y] > *diam_g) {
                found_x = x;
                found_y = y;
                break;
            }
        }
    }
    if (found_x < 0) return {};
    std::vector<HomSplitBranch> out;
    for (int removed : {found_x, found_y}) {
        VertexSet keep(k);
        for (int c = 0; c < k; ++c)
            if (c != removed) keep.insert(c);
        InducedSubgraph sub = induced_subgraph(h, keep);
        auto target = std::make_shared<const TargetGraph>(
            TargetGraph(sub.graph, inst.target().name() + "-v" + std::to_string(removed + 1)));
        std::vector<HomMask> lists(static_cast<std::size_t>(inst.vertex_count()), 0);
        for (int v = 0; v < inst.vertex_count(); ++v)
            for (int c = 0; c < k; ++c)
                if (c != removed && hom_mask_has(inst.list(v), c))
                    lists[static_cast<std::size_t>(v)] |= hom_bit(sub.from_original[c]);
        out.push_back(HomSplitBranch{HomInstance(inst.graph_ptr(), std::move(lists), target),
                                     sub.to_original});
    }
    return out;
}

struct HomOutcome {
    Verdict verdict = Verdict::Unsat;
    std::optional<HomMapping> mapping;
    SearchStats stats;

    bool sat() const { return verdict == Verdict::Sat; }
};

namespace detail {

struct HomLayers {
    VertexSet v1, v2, v3;  // list sizes 1 / 2 / >= 3
    std::int64_t mu = 0;   // |v3|
};

inline HomLayers hom_layers(const HomInstance& inst) {
    const int n = inst.vertex_count();
    HomLayers out{VertexSet(n), VertexSet(n), VertexSet(n), 0};
    for (int v = 0; v < n; ++v) {
        switch (int s = hom_mask_size(inst.list(v)); s) {
            case 0: throw std::logic_error("hom_layers: vertex with empty list");
            case 1: out.v1.insert(v); break;
            case 2: out.v2.insert(v); break;
            default: out.v3.insert(v); break;
        }
    }
    out.mu = out.v3.count();
    return out;
}

struct HomSearch {
    const SolverConfig& cfg;
    SearchStats& stats;
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void tick() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline) throw TimeoutSignal{};
    }

    bool reduce_child(HomInstance& child) {
        if (hom_reduce_in_place(child, &stats.r1) == ReduceStatus::Failure) {
            ++stats.r2;
            return false;
        }
        return true;
    }

    std::optional<HomMapping> branch_on_vertex(const HomInstance& inst, int v, int depth) {
        for (int c = 0; c < inst.target().color_count(); ++c) {
            if (!hom_mask_has(inst.list(v), c)) continue;
            HomInstance child = inst;
            child.set_list(v, hom_bit(c));
            if (!reduce_child(child)) continue;
            auto r = run(std::move(child), depth + 1, true);
            if (r) return r;
        }
        return std::nullopt;
    }

    std::optional<HomMapping> complete_branch(const HomInstance& inst, const HomLayers& ls, int depth) {
        return branch_on_vertex(inst, ls.v3.first(), depth);
    }

    std::optional<HomMapping> branch_b3(const HomInstance& inst, std::pair<int, int> pair, int depth) {
        auto [u, v] = pair;
        const int k = inst.target().color_count();
        for (int a = 0; a < k; ++a) {
            if (!hom_mask_has(inst.list(u), a)) continue;
            for (int b = 0; b < k; ++b) {
                if (a == b || !hom_mask_has(inst.list(v), b)) continue;
                HomInstance child = inst;
                child.set_list(u, hom_bit(a));
                child.set_list(v, hom_bit(b));
                if (!reduce_child(child)) continue;
                auto r = run(std::move(child), depth + 1, true);
                if (r) return r;
            }
        }
        if (!inst.graph().adjacent(u, v)) {
            Contraction con = contract_pair(inst.graph(), u, v);
            auto graph = std::make_shared<const Graph>(std::move(con.graph));
            std::vector<HomMask> lists(static_cast<std::size_t>(graph->vertex_count()), 0);
            for (int w = 0; w < inst.vertex_count(); ++w)
                lists[static_cast<std::size_t>(con.to_contracted[w])] = inst.list(w);
            lists[static_cast<std::size_t>(con.merged_vertex)] = inst.list(u) & inst.list(v);
            HomInstance child(graph, std::move(lists), inst.target_ptr());
            if (reduce_child(child)) {
                auto r = run(std::move(child), depth + 1, true);
                if (r) {
                    HomMapping lifted(static_cast<std::size_t>(inst.vertex_count()));
                    for (int w = 0; w < inst.vertex_count(); ++w)
                        lifted[static_cast<std::size_t>(w)] = (*r)[static_cast<std::size_t>(con.to_contracted[w])];
                    return lifted;
                }
            }
        }
        return std::nullopt;
    }

    // Witness-tuple stage over target colors. Branches on every accepted
    // tuple; the caller always falls back to complete branching when no
    // branch proves SAT, so no correctness rests on the size bound here.
    std::optional<HomMapping> witness_stage(const HomInstance& inst, const HomLayers& ls, int depth) {
        const std::int64_t mu = ls.mu;
        const int bound = witness_size_bound(cfg.k_const, mu);
        const std::int64_t goal = domination_goal(mu);
        const std::vector<int> pool = ls.v3.to_vector();
        const int n = inst.vertex_count();
        const int k = inst.target().color_count();
        std::int64_t pairs_checked = 0;

        std::vector<int> s_idx, t_idx;
        std::optional<HomMapping> found;

        auto try_tuple = [&](const VertexSet& s, const std::vector<int>& tilde_ids, int a,
                             const std::vector<int>& phi_colors) -> bool {
            ++stats.b4;
            HomInstance child = inst;
            bool consistent = true;
            s.for_each([&](int v) {
                if (!hom_mask_has(child.list(v), a)) consistent = false;
            });
            if (!consistent) return false;
            s.for_each([&](int v) { child.set_list(v, hom_bit(a)); });
            for (std::size_t i = 0; i < tilde_ids.size(); ++i)
                child.set_list(tilde_ids[i], hom_bit(phi_colors[i]));
            if (!reduce_child(child)) return false;
            std::int64_t mu_after = hom_layers(child).mu;
            if (mu - mu_after < goal) ++stats.progress_violations;
            auto r = run(std::move(child), depth + 1, true);
            if (r) {
                found = std::move(r);
                return true;
            }
            return false;
        };

        // combinations of `size` pool indices in lexicographic order
        auto combos = [](int universe, int size, const std::function<bool(const std::vector<int>&)>& f) {
            if (size > universe) return true;
            std::vector<int> idx(static_cast<std::size_t>(size));
            for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
            while (true) {
                if (!f(idx)) return false;
                int i = size - 1;
                while (i >= 0 && idx[static_cast<std::size_t>(i)] == universe - size + i) --i;
                if (i < 0) return true;
                ++idx[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < size; ++j)
                    idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
        };

        bool budget_ok = true;
        for (int s_size = 0; s_size <= bound && budget_ok && !found; ++s_size) {
            combos(static_cast<int>(pool.size()), s_size, [&](const std::vector<int>& si) {
                VertexSet s(n);
                HomMask a_candidates = inst.target().full_mask();
                for (int i : si) {
                    s.insert(pool[static_cast<std::size_t>(i)]);
                    a_candidates &= inst.list(pool[static_cast<std::size_t>(i)]);
                }
                std::vector<int> rest;
                for (int v : pool)
                    if (!s.contains(v)) rest.push_back(v);
                for (int t_size = 0; t_size <= bound && budget_ok && !found; ++t_size) {
                    combos(static_cast<int>(rest.size()), t_size, [&](const std::vector<int>& ti) {
                        if (pairs_checked >= cfg.witness_budget) {
                            budget_ok = false;
                            return false;
                        }
                        ++pairs_checked;
                        VertexSet st(n);
                        std::vector<int> tilde_ids;
                        for (int i : ti) {
                            st.insert(rest[static_cast<std::size_t>(i)]);
                            tilde_ids.push_back(rest[static_cast<std::size_t>(i)]);
                        }
                        if (domination_count(inst.graph(), ls.v3, s, st) < goal) return true;
                        for (int a = 0; a < k && !found; ++a) {
                            if (s.any() && !hom_mask_has(a_candidates, a)) continue;
                            // phi odometer over the allowed colors of each
                            // tilde vertex, color a excluded
                            std::vector<std::vector<int>> options(tilde_ids.size());
                            bool feasible = true;
                            for (std::size_t i = 0; i < tilde_ids.size(); ++i) {
                                HomMask m = inst.list(tilde_ids[i]) & ~hom_bit(a);
                                for (int c = 0; c < k; ++c)
                                    if (hom_mask_has(m, c)) options[i].push_back(c);
                                if (options[i].empty()) feasible = false;
                            }
                            if (!feasible) continue;
                            std::vector<std::size_t> digit(tilde_ids.size(), 0);
                            while (!found) {
                                std::vector<int> phi(tilde_ids.size());
                                for (std::size_t i = 0; i < tilde_ids.size(); ++i)
                                    phi[i] = options[i][digit[i]];
                                if (try_tuple(s, tilde_ids, a, phi)) break;
                                bool more = false;
                                for (std::size_t i = tilde_ids.size(); i-- > 0;) {
                                    if (++digit[i] < options[i].size()) {
                                        more = true;
                                        break;
                                    }
                                    digit[i] = 0;
                                }
                                if (!more) break;
                            }
                        }
                        return !found;
                    });
                }
                return budget_ok && !found;
            });
        }
        stats.witness_tuples_checked += pairs_checked;
        return found;
    }

    std::optional<HomMapping> degree_or_ball(const HomInstance& inst, const HomLayers& ls, int depth) {
        const Graph& g = inst.graph();
        VertexSet active = ls.v2;
        active |= ls.v3;
        std::int64_t measure = 2 * ls.v2.count() + 3 * ls.v3.count();
        int d_eff = std::max(2, diameter(g).value_or(3));
        double mu3 = static_cast<double>(measure);
        double threshold = std::pow(mu3 * std::log(mu3), 1.0 / d_eff);

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
            return branch_on_vertex(inst, best, depth);
        }

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
            for (int c = 0; c < inst.target().color_count(); ++c)
                if (hom_mask_has(inst.list(xv), c)) cs.push_back(c);
            if (total > (std::uint64_t{1} << 61) / cs.size())
                throw std::runtime_error("hom_solve: dominating-ball enumeration too large");
            total *= cs.size();
            choices.push_back(std::move(cs));
        }
        auto probe = [&](std::uint64_t idx) -> std::optional<HomMapping> {
            HomInstance child = inst;
            std::uint64_t rest = idx;
            for (std::size_t i = x.size(); i-- > 0;) {
                const auto& cs = choices[i];
                child.set_list(x[i], hom_bit(cs[rest % cs.size()]));
                rest /= cs.size();
            }
            if (hom_reduce_in_place(child) == ReduceStatus::Failure) return std::nullopt;
            return hom_two_lists(child);
        };
        auto hit = find_first_index<HomMapping>(total, cfg.threads, probe);
        stats.enumeration_assignments +=
            hit ? static_cast<std::int64_t>(hit->first) + 1 : static_cast<std::int64_t>(total);
        if (hit) return std::move(hit->second);
        return std::nullopt;
    }

    std::optional<HomMapping> run(HomInstance inst, int depth, bool already_reduced) {
        tick();
        ++stats.nodes_expanded;
        if (depth > stats.max_depth) stats.max_depth = depth;
        if (!already_reduced && !reduce_child(inst)) return std::nullopt;

        auto split = distance_split(inst);
        if (!split.empty()) {
            for (auto& branch : split) {
                auto r = run(branch.instance, depth + 1, false);
                if (r) {
                    HomMapping lifted(r->size());
                    for (std::size_t i = 0; i < r->size(); ++i)
                        lifted[i] = branch.color_to_parent[static_cast<std::size_t>((*r)[i])];
                    return lifted;
                }
            }
            return std::nullopt;
        }

        HomLayers ls = hom_layers(inst);
        if (ls.v3.none()) {
            ++stats.r3;
            return hom_two_lists(inst);
        }
        if (cfg.mode == SolveMode::Complete) return complete_branch(inst, ls, depth);

        const TargetGraph& t = inst.target();
        auto diam_now = diameter(inst.graph());
        if (t.p2() && t.p3() && diam_now && *diam_now <= 2) {
            if (auto v = scan_b1(inst.graph(), ls.v1, ls.v3, ls.mu)) {
                ++stats.b1;
                return branch_on_vertex(inst, *v, depth);
            }
            if (auto v = scan_b2(inst.graph(), ls.v2, ls.v3, ls.mu)) {
                ++stats.b2;
                return branch_on_vertex(inst, *v, depth);
            }
            if (auto pair = scan_b3(inst.graph(), ls.v3, ls.mu)) {
                ++stats.b3;
                return branch_b3(inst, *pair, depth);
            }
            auto r = witness_stage(inst, ls, depth);
            if (r) return r;
            ++stats.complete_fallbacks;
            return complete_branch(inst, ls, depth);
        }
        return degree_or_ball(inst, ls, depth);
    }
};

}  // namespace detail

/// Decide whether a list homomorphism into the target exists. The target
/// must satisfy p1 and the instance graph must have diameter <= 3; the
/// decision is unconditionally correct (a complete branching step backs
/// every heuristic stage). SAT mappings are verified before returning.
inline HomOutcome hom_solve(const HomInstance& inst, const SolverConfig& cfg) {
    if (!inst.target().p1())
        throw std::invalid_argument("hom_solve: target must have max degree 2 (property p1)");
    auto diam_g = diameter(inst.graph());
    if (!diam_g || *diam_g > 3)
        throw std::invalid_argument("hom_solve: instance graph diameter must be <= 3");

    auto started = std::chrono::steady_clock::now();
    HomOutcome out;
    detail::HomSearch search{cfg, out.stats, detail::make_deadline(cfg)};
    try {
        auto r = search.run(inst, 0, false);
        if (r) {
            out.verdict = Verdict::Sat;
            out.mapping = std::move(r);
        } else {
            out.verdict = Verdict::Unsat;
        }
    } catch (const detail::TimeoutSignal&) {
        out.verdict = Verdict::Timeout;
    }
    out.stats.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (out.verdict == Verdict::Sat) {
        if (!out.mapping || !verify_hom(inst, *out.mapping))
            throw std::logic_error("hom_solve: produced an invalid mapping");
    }
    return out;
}

}  // namespace tricolor

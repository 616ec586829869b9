#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tricolor/instance.hpp"

namespace tricolor {

struct Literal {
    int var = 0;
    bool negated = false;
};

/// 2-CNF formula. A unit clause is stored as a pair of identical literals.
struct TwoCnf {
    int variable_count = 0;
    std::vector<std::array<Literal, 2>> clauses;

    void add_clause(Literal a, Literal b) { clauses.push_back({a, b}); }
    void add_unit(Literal a) { add_clause(a, a); }
};

namespace detail {

// literal index: 2*var for the positive literal, 2*var+1 for the negation
inline int lit_index(Literal l) { return 2 * l.var + (l.negated ? 1 : 0); }
inline int lit_negation(int idx) { return idx ^ 1; }

}  // namespace detail

/// Decide satisfiability via strongly connected components of the
/// implication graph; returns a model on success, nullopt on UNSAT.
inline std::optional<std::vector<bool>> solve_2sat(const TwoCnf& f) {
    for (const auto& cl : f.clauses)
        for (const Literal& l : cl)
            if (l.var < 0 || l.var >= f.variable_count)
                throw std::invalid_argument("solve_2sat: literal variable out of range");

    const int node_count = 2 * f.variable_count;
    // CSR adjacency of the implication graph: (a | b) gives ~a -> b, ~b -> a.
    std::vector<int> head(static_cast<std::size_t>(node_count) + 1, 0);
    for (const auto& cl : f.clauses) {
        ++head[detail::lit_negation(detail::lit_index(cl[0])) + 1];
        ++head[detail::lit_negation(detail::lit_index(cl[1])) + 1];
    }
    for (int i = 0; i < node_count; ++i) head[i + 1] += head[i];
    std::vector<int> edges(f.clauses.size() * 2);
    {
        std::vector<int> cursor(head.begin(), head.end() - 1);
        for (const auto& cl : f.clauses) {
            int a = detail::lit_index(cl[0]);
            int b = detail::lit_index(cl[1]);
            edges[cursor[detail::lit_negation(a)]++] = b;
            edges[cursor[detail::lit_negation(b)]++] = a;
        }
    }

    // Iterative Tarjan; component ids are assigned sinks-first.
    std::vector<int> comp(static_cast<std::size_t>(node_count), -1);
    std::vector<int> low(static_cast<std::size_t>(node_count), 0);
    std::vector<int> index(static_cast<std::size_t>(node_count), -1);
    std::vector<int> stack;
    std::vector<char> on_stack(static_cast<std::size_t>(node_count), 0);
    int next_index = 0, next_comp = 0;

    struct Frame {
        int node;
        int edge_cursor;
    };
    std::vector<Frame> call;
    for (int root = 0; root < node_count; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, head[root]});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& fr = call.back();
            if (fr.edge_cursor < head[fr.node + 1]) {
                int to = edges[fr.edge_cursor++];
                if (index[to] == -1) {
                    index[to] = low[to] = next_index++;
                    stack.push_back(to);
                    on_stack[to] = 1;
                    call.push_back({to, head[to]});
                } else if (on_stack[to]) {
                    low[fr.node] = std::min(low[fr.node], index[to]);
                }
            } else {
                int v = fr.node;
                call.pop_back();
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = next_comp;
                        if (w == v) break;
                    }
                    ++next_comp;
                }
                if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
            }
        }
    }

    std::vector<bool> model(static_cast<std::size_t>(f.variable_count));
    for (int x = 0; x < f.variable_count; ++x) {
        if (comp[2 * x] == comp[2 * x + 1]) return std::nullopt;
        // Sinks get smaller component ids, so the literal whose component
        // id is smaller has no pending implications and can be made true.
        model[x] = comp[2 * x] < comp[2 * x + 1];
    }
    return model;
}

/// 2-SAT encoding of a list-coloring instance whose lists all have size 1
/// or 2. One variable per size-2 vertex (false = smaller color, true =
/// larger); singleton vertices are folded into the clauses as constants.
struct EdwardsEncoding {
    TwoCnf cnf;
    bool infeasible = false;  // two forced, equal-colored endpoints of an edge
    std::vector<int> var_of_vertex;          // -1 for singleton-list vertices
    std::vector<std::array<int, 2>> choice;  // per vertex: color for false / true

    Coloring decode(const std::vector<bool>& model) const {
        Coloring c(var_of_vertex.size());
        for (std::size_t v = 0; v < var_of_vertex.size(); ++v) {
            int var = var_of_vertex[v];
            c[v] = (var < 0) ? choice[v][0] : choice[v][model[static_cast<std::size_t>(var)] ? 1 : 0];
        }
        return c;
    }
};

inline EdwardsEncoding edwards_encode(const ColoringInstance& inst) {
    const int n = inst.vertex_count();
    EdwardsEncoding enc;
    enc.var_of_vertex.assign(static_cast<std::size_t>(n), -1);
    enc.choice.assign(static_cast<std::size_t>(n), {0, 0});
    for (int v = 0; v < n; ++v) {
        ColorMask m = inst.list(v);
        int size = mask_size(m);
        if (size == 0 || size > 2)
            throw std::logic_error("edwards_encode: list size must be 1 or 2");
        int lo = lowest_color(m);
        if (size == 1) {
            enc.choice[v] = {lo, lo};
        } else {
            int hi = lowest_color(static_cast<ColorMask>(m & ~color_bit(lo)));
            enc.choice[v] = {lo, hi};
            enc.var_of_vertex[v] = enc.cnf.variable_count++;
        }
    }

    // "vertex v takes color c" as a literal; only valid when c is in L(v).
    auto takes = [&](int v, int c) -> Literal {
        return Literal{enc.var_of_vertex[v], enc.choice[v][1] != c};
    };
    const Graph& g = inst.graph();
    for (int u = 0; u < n; ++u) {
        g.neighbors(u).for_each([&](int v) {
            if (v <= u) return;
            ColorMask shared = static_cast<ColorMask>(inst.list(u) & inst.list(v));
            for (int c = 1; c <= 3; ++c) {
                if (!mask_has(shared, c)) continue;
                bool u_forced = enc.var_of_vertex[u] < 0;
                bool v_forced = enc.var_of_vertex[v] < 0;
                if (u_forced && v_forced) {
                    if (enc.choice[u][0] == c && enc.choice[v][0] == c) enc.infeasible = true;
                } else if (u_forced) {
                    if (enc.choice[u][0] == c) {
                        Literal lv = takes(v, c);
                        enc.cnf.add_unit(Literal{lv.var, !lv.negated});
                    }
                } else if (v_forced) {
                    if (enc.choice[v][0] == c) {
                        Literal lu = takes(u, c);
                        enc.cnf.add_unit(Literal{lu.var, !lu.negated});
                    }
                } else {
                    Literal lu = takes(u, c), lv = takes(v, c);
                    enc.cnf.add_clause(Literal{lu.var, !lu.negated}, Literal{lv.var, !lv.negated});
                }
            }
        });
    }
    return enc;
}

/// Rule R3: decide an instance whose lists all have size <= 2.  An empty
/// list yields UNSAT (nullopt).  SAT certificates are verified before
/// being returned.
inline std::optional<Coloring> finish_two_lists(const ColoringInstance& inst) {
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (mask_size(inst.list(v)) > 2)
            throw std::logic_error("finish_two_lists: vertex with a 3-element list");
        if (mask_size(inst.list(v)) == 0) return std::nullopt;
    }
    EdwardsEncoding enc = edwards_encode(inst);
    if (enc.infeasible) return std::nullopt;
    auto model = solve_2sat(enc.cnf);
    if (!model) return std::nullopt;
    Coloring c = enc.decode(*model);
    if (!verify(inst, c)) throw std::logic_error("finish_two_lists: produced an invalid certificate");
    return c;
}

/// DIMACS-CNF text of a formula (debugging aid).
inline std::string to_dimacs_cnf(const TwoCnf& f) {
    std::string out = "p cnf " + std::to_string(f.variable_count) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& cl : f.clauses) {
        for (const Literal& l : cl) {
            if (l.negated) out += '-';
            out += std::to_string(l.var + 1);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

}  // namespace tricolor

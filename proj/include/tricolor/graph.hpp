#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tricolor/vertex_set.hpp"

namespace tricolor {

/// Thrown by contract_pair when the two vertices are adjacent, i.e. the
/// merged vertex would need a loop.  Callers treat it as "this merge is
/// infeasible", not as a programming error.
class ContractionRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kUnreachable = -1;

/// Immutable simple undirected graph.  Loops are permitted only when the
/// graph was built with allow_loops (used for homomorphism targets).
/// Adjacency is stored as one bit row per vertex, so neighborhood set
/// algebra is a handful of word operations.
class Graph {
public:
    Graph() = default;

    int vertex_count() const { return static_cast<int>(rows_.size()); }
    bool allows_loops() const { return allows_loops_; }
    std::int64_t edge_count() const { return edge_count_; }

    bool adjacent(int u, int v) const { return rows_[check(u)].contains(check(v)); }

    /// Neighborhood bit row. Contains v itself exactly when v has a loop.
    const VertexSet& neighbors(int v) const { return rows_[check(v)]; }

    int degree(int v) const { return rows_[check(v)].count(); }

    bool has_loop(int v) const { return rows_[check(v)].contains(v); }

    VertexSet all_vertices() const {
        VertexSet s(vertex_count());
        for (int v = 0; v < vertex_count(); ++v) s.insert(v);
        return s;
    }

private:
    friend class GraphBuilder;
    int check(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::invalid_argument("Graph: vertex id out of range");
        return v;
    }

    std::vector<VertexSet> rows_;
    std::int64_t edge_count_ = 0;
    bool allows_loops_ = false;
};

/// All mutation happens here; the built Graph is immutable and safe to
/// share across threads.
class GraphBuilder {
public:
    explicit GraphBuilder(int n, bool allow_loops = false) : allow_loops_(allow_loops) {
        if (n < 0) throw std::invalid_argument("GraphBuilder: negative vertex count");
        rows_.assign(static_cast<std::size_t>(n), VertexSet(n));
    }

    GraphBuilder& add_edge(int u, int v) {
        check(u);
        check(v);
        if (u == v && !allow_loops_) throw std::invalid_argument("GraphBuilder: loop on a loopless graph");
        if (!rows_[u].contains(v)) {
            rows_[u].insert(v);
            rows_[v].insert(u);
            ++edge_count_;
        }
        return *this;
    }

    bool has_edge(int u, int v) const {
        check(u);
        check(v);
        return rows_[u].contains(v);
    }

    Graph build() {
        Graph g;
        g.rows_ = std::move(rows_);
        g.edge_count_ = edge_count_;
        g.allows_loops_ = allow_loops_;
        rows_.clear();
        edge_count_ = 0;
        return g;
    }

private:
    void check(int v) const {
        if (v < 0 || v >= static_cast<int>(rows_.size()))
            throw std::invalid_argument("GraphBuilder: vertex id out of range");
    }

    std::vector<VertexSet> rows_;
    std::int64_t edge_count_ = 0;
    bool allow_loops_ = false;
};

/// Hop distances from source; kUnreachable for other components.
inline std::vector<int> bfs_distances(const Graph& g, int source) {
    if (source < 0 || source >= g.vertex_count())
        throw std::invalid_argument("bfs_distances: source out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), kUnreachable);
    std::deque<int> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        g.neighbors(v).for_each([&](int u) {
            if (dist[u] == kUnreachable) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        });
    }
    return dist;
}

inline bool is_connected(const Graph& g) {
    if (g.vertex_count() == 0) return true;
    auto dist = bfs_distances(g, 0);
    for (int d : dist)
        if (d == kUnreachable) return false;
    return true;
}

/// Max pairwise distance; nullopt when g is disconnected. 0 for the empty
/// and the single-vertex graph.
inline std::optional<int> diameter(const Graph& g) {
    int best = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        auto dist = bfs_distances(g, v);
        for (int d : dist) {
            if (d == kUnreachable) return std::nullopt;
            if (d > best) best = d;
        }
    }
    return best;
}

/// Vertices at distance <= radius from v; `closed` keeps v itself.
inline VertexSet ball(const Graph& g, int v, int radius, bool closed = true) {
    if (radius < 0) throw std::invalid_argument("ball: negative radius");
    auto dist = bfs_distances(g, v);
    VertexSet out(g.vertex_count());
    for (int u = 0; u < g.vertex_count(); ++u)
        if (dist[u] != kUnreachable && dist[u] <= radius) out.insert(u);
    if (!closed) out.erase(v);
    return out;
}

struct InducedSubgraph {
    Graph graph;
    std::vector<int> to_original;   // sub id -> original id
    std::vector<int> from_original; // original id -> sub id, -1 if absent
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& s) {
    if (s.universe() != g.vertex_count())
        throw std::invalid_argument("induced_subgraph: universe mismatch");
    InducedSubgraph out;
    out.from_original.assign(static_cast<std::size_t>(g.vertex_count()), -1);
    s.for_each([&](int v) {
        out.from_original[v] = static_cast<int>(out.to_original.size());
        out.to_original.push_back(v);
    });
    GraphBuilder b(static_cast<int>(out.to_original.size()), g.allows_loops());
    for (int sv = 0; sv < static_cast<int>(out.to_original.size()); ++sv) {
        int v = out.to_original[sv];
        (g.neighbors(v) & s).for_each([&](int u) {
            int su = out.from_original[u];
            if (su >= sv) b.add_edge(sv, su);
        });
    }
    out.graph = b.build();
    return out;
}

struct Contraction {
    Graph graph;
    int merged_vertex = -1;          // id of the replacement vertex
    std::vector<int> to_contracted;  // original id -> contracted id (u,v both map to merged_vertex)
};

/// Merge non-adjacent u and v into one vertex adjacent to N(u) u N(v).
/// Throws ContractionRejected when u and v are adjacent.
inline Contraction contract_pair(const Graph& g, int u, int v) {
    if (u < 0 || u >= g.vertex_count() || v < 0 || v >= g.vertex_count())
        throw std::invalid_argument("contract_pair: vertex id out of range");
    if (u == v) throw std::invalid_argument("contract_pair: identical vertices");
    if (g.allows_loops()) throw std::invalid_argument("contract_pair: loops unsupported");
    if (g.adjacent(u, v)) throw ContractionRejected("contract_pair: endpoints are adjacent");

    Contraction out;
    int n = g.vertex_count();
    out.to_contracted.assign(static_cast<std::size_t>(n), -1);
    int next_id = 0;
    for (int w = 0; w < n; ++w)
        if (w != u && w != v) out.to_contracted[w] = next_id++;
    out.merged_vertex = next_id;  // the merged vertex takes the last id
    out.to_contracted[u] = out.merged_vertex;
    out.to_contracted[v] = out.merged_vertex;

    GraphBuilder b(n - 1, false);
    for (int w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        g.neighbors(w).for_each([&](int x) {
            if (x > w && x != u && x != v) b.add_edge(out.to_contracted[w], out.to_contracted[x]);
        });
    }
    (g.neighbors(u) | g.neighbors(v)).for_each([&](int x) {
        b.add_edge(out.merged_vertex, out.to_contracted[x]);
    });
    out.graph = b.build();
    return out;
}

/// Lowest-id vertex of N[u] n N[v], or nullopt when the closed
/// neighborhoods are disjoint.
inline std::optional<int> common_neighbor_witness(const Graph& g, int u, int v) {
    if (u < 0 || u >= g.vertex_count() || v < 0 || v >= g.vertex_count())
        throw std::invalid_argument("common_neighbor_witness: vertex id out of range");
    VertexSet cu = g.neighbors(u);
    cu.insert(u);
    VertexSet cv = g.neighbors(v);
    cv.insert(v);
    cu &= cv;
    int w = cu.first();
    if (w < 0) return std::nullopt;
    return w;
}

}  // namespace tricolor

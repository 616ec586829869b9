#pragma once

#include <bit>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tricolor/graph.hpp"

namespace tricolor {

/// A color list is a bit mask, bit c-1 for color c in {1,2,3}.
using ColorMask = std::uint8_t;

inline constexpr ColorMask kFullList = 0b111;

inline constexpr ColorMask color_bit(int color) { return static_cast<ColorMask>(1u << (color - 1)); }
inline int mask_size(ColorMask m) { return std::popcount(static_cast<unsigned>(m)); }
inline bool mask_has(ColorMask m, int color) { return (m & color_bit(color)) != 0; }
inline int lowest_color(ColorMask m) { return std::countr_zero(static_cast<unsigned>(m)) + 1; }

/// Per-vertex colors in {1,2,3}; a SAT certificate once verified.
using Coloring = std::vector<int>;

/// A loopless graph plus one color list per vertex. Value-semantic: each
/// search branch owns its copy (the graph itself is shared, immutable).
class ColoringInstance {
public:
    ColoringInstance(std::shared_ptr<const Graph> graph, std::vector<ColorMask> lists)
        : graph_(std::move(graph)), lists_(std::move(lists)) {
        if (!graph_) throw std::invalid_argument("ColoringInstance: null graph");
        if (graph_->allows_loops()) throw std::invalid_argument("ColoringInstance: graph must be loopless");
        if (static_cast<int>(lists_.size()) != graph_->vertex_count())
            throw std::invalid_argument("ColoringInstance: list count mismatch");
        for (ColorMask m : lists_)
            if (m > kFullList) throw std::invalid_argument("ColoringInstance: list not a subset of {1,2,3}");
    }

    static ColoringInstance with_full_lists(std::shared_ptr<const Graph> graph) {
        std::vector<ColorMask> lists(static_cast<std::size_t>(graph->vertex_count()), kFullList);
        return ColoringInstance(std::move(graph), std::move(lists));
    }

    const Graph& graph() const { return *graph_; }
    const std::shared_ptr<const Graph>& graph_ptr() const { return graph_; }
    int vertex_count() const { return graph_->vertex_count(); }

    ColorMask list(int v) const { return lists_[check(v)]; }
    void set_list(int v, ColorMask m) {
        if (m > kFullList) throw std::invalid_argument("set_list: list not a subset of {1,2,3}");
        lists_[check(v)] = m;
    }

    const std::vector<ColorMask>& lists() const { return lists_; }

private:
    int check(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::invalid_argument("ColoringInstance: vertex id out of range");
        return v;
    }

    std::shared_ptr<const Graph> graph_;
    std::vector<ColorMask> lists_;
};

/// Partition of the vertex set by list size, with both branching measures.
struct LayerStructure {
    VertexSet v1, v2, v3;
    std::int64_t measure_diam3 = 0;  // 2|V2| + 3|V3|
    std::int64_t measure_diam2 = 0;  // |V3|
};

enum class ReduceStatus { Reduced, Failure };

/// Propagate singleton lists to fixpoint (rule R1): a vertex whose list is
/// {a} removes a from every neighbor's list. Returns Failure exactly when
/// some list empties (rule R2). Never deletes vertices.
inline ReduceStatus reduce_in_place(ColoringInstance& inst, std::int64_t* r1_firings = nullptr) {
    const Graph& g = inst.graph();
    std::deque<int> queue;
    std::vector<char> queued(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (mask_size(inst.list(v)) == 0) return ReduceStatus::Failure;
        if (mask_size(inst.list(v)) == 1) {
            queue.push_back(v);
            queued[v] = 1;
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ColorMask forced = inst.list(v);
        if (r1_firings) ++*r1_firings;
        bool failed = false;
        g.neighbors(v).for_each([&](int u) {
            if (failed) return;
            ColorMask lu = inst.list(u);
            if (!(lu & forced)) return;
            ColorMask updated = static_cast<ColorMask>(lu & ~forced);
            inst.set_list(u, updated);
            if (updated == 0) {
                failed = true;
            } else if (mask_size(updated) == 1 && !queued[u]) {
                queue.push_back(u);
                queued[u] = 1;
            }
        });
        if (failed) return ReduceStatus::Failure;
    }
    return ReduceStatus::Reduced;
}

/// Value version of reduce_in_place; nullopt signals Failure.
inline std::optional<ColoringInstance> reduce(ColoringInstance inst) {
    if (reduce_in_place(inst) == ReduceStatus::Failure) return std::nullopt;
    return inst;
}

/// Requires every list nonempty (i.e. a reduced instance).
inline LayerStructure layers(const ColoringInstance& inst) {
    int n = inst.vertex_count();
    LayerStructure out{VertexSet(n), VertexSet(n), VertexSet(n), 0, 0};
    for (int v = 0; v < n; ++v) {
        switch (mask_size(inst.list(v))) {
            case 1: out.v1.insert(v); break;
            case 2: out.v2.insert(v); break;
            case 3: out.v3.insert(v); break;
            default: throw std::logic_error("layers: vertex with empty list");
        }
    }
    std::int64_t n2 = out.v2.count(), n3 = out.v3.count();
    out.measure_diam3 = 2 * n2 + 3 * n3;
    out.measure_diam2 = n3;
    return out;
}

/// True iff c is a proper coloring of inst.graph and every vertex's color
/// lies in its list.
inline bool verify(const ColoringInstance& inst, const Coloring& c) {
    if (static_cast<int>(c.size()) != inst.vertex_count())
        throw std::invalid_argument("verify: coloring size mismatch");
    const Graph& g = inst.graph();
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (c[v] < 1 || c[v] > 3) return false;
        if (!mask_has(inst.list(v), c[v])) return false;
    }
    for (int v = 0; v < inst.vertex_count(); ++v) {
        bool clash = false;
        g.neighbors(v).for_each([&](int u) {
            if (u > v && c[u] == c[v]) clash = true;
        });
        if (clash) return false;
    }
    return true;
}

}  // namespace tricolor

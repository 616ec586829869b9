#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "tricolor/instance.hpp"

namespace tricolor {

class GenerationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GenFamily { UniversalApex, RandomDiam2, RandomDiam3, Cycle, Petersen, CustomEdgeProb };
enum class ListMode { Full, RandomNonempty, RandomSizeLe2 };

struct GenSpec {
    GenFamily family = GenFamily::RandomDiam2;
    int n = 10;
    std::optional<double> edge_prob;  // family-dependent default when unset
    std::uint64_t rng_seed = 0;
    ListMode list_mode = ListMode::Full;
};

namespace detail {

// uint64 -> [0,1) with a fixed mapping, so instances are reproducible
// across standard libraries.
inline double gen_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Graph random_graph(int n, double p, std::mt19937_64& rng) {
    GraphBuilder b(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (gen_unit(rng) < p) b.add_edge(u, v);
    return b.build();
}

inline double default_edge_prob(GenFamily family, int n) {
    switch (family) {
        case GenFamily::RandomDiam3: {
            double p = 1.6 * std::log(std::max(2, n)) / std::max(2, n);
            return std::min(0.4, std::max(0.05, p));
        }
        default:
            return 0.5;
    }
}

}  // namespace detail

inline constexpr int kGenMaxRetries = 10000;

/// The standard 10-vertex Petersen graph: outer 5-cycle 0..4, inner
/// pentagram 5..9, spokes i -- i+5.
inline Graph petersen_graph() {
    GraphBuilder b(10);
    for (int i = 0; i < 5; ++i) {
        b.add_edge(i, (i + 1) % 5);
        b.add_edge(5 + i, 5 + (i + 2) % 5);
        b.add_edge(i, 5 + i);
    }
    return b.build();
}

inline Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle_graph: n must be >= 3");
    GraphBuilder b(n);
    for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
    return b.build();
}

/// Seeded instance generator. Diameter-targeted families rejection-sample
/// until the recomputed diameter matches; same (spec, seed) always yields
/// the same instance.
inline ColoringInstance generate(const GenSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
    if (spec.edge_prob && (*spec.edge_prob < 0.0 || *spec.edge_prob > 1.0))
        throw std::invalid_argument("generate: edge_prob must lie in [0,1]");
    std::mt19937_64 rng(spec.rng_seed);
    const double p = spec.edge_prob ? *spec.edge_prob : detail::default_edge_prob(spec.family, spec.n);

    Graph g;
    switch (spec.family) {
        case GenFamily::UniversalApex: {
            // random graph on n-1 vertices plus a vertex adjacent to all of
            // them; diameter <= 2 by construction
            GraphBuilder b(spec.n);
            for (int u = 0; u + 1 < spec.n; ++u)
                for (int v = u + 1; v + 1 < spec.n; ++v)
                    if (detail::gen_unit(rng) < p) b.add_edge(u, v);
            for (int u = 0; u + 1 < spec.n; ++u) b.add_edge(u, spec.n - 1);
            g = b.build();
            break;
        }
        case GenFamily::RandomDiam2:
        case GenFamily::RandomDiam3: {
            const int want = spec.family == GenFamily::RandomDiam2 ? 2 : 3;
            bool ok = false;
            for (int attempt = 0; attempt < kGenMaxRetries && !ok; ++attempt) {
                Graph candidate = detail::random_graph(spec.n, p, rng);
                auto d = diameter(candidate);
                if (d && *d == want) {
                    g = std::move(candidate);
                    ok = true;
                }
            }
            if (!ok)
                throw GenerationFailed("generate: no graph with the requested diameter after " +
                                       std::to_string(kGenMaxRetries) + " attempts");
            break;
        }
        case GenFamily::Cycle:
            g = cycle_graph(spec.n);
            break;
        case GenFamily::Petersen:
            g = petersen_graph();
            break;
        case GenFamily::CustomEdgeProb:
            g = detail::random_graph(spec.n, p, rng);
            break;
    }

    std::vector<ColorMask> lists(static_cast<std::size_t>(g.vertex_count()), kFullList);
    switch (spec.list_mode) {
        case ListMode::Full:
            break;
        case ListMode::RandomNonempty:
            for (auto& m : lists) m = static_cast<ColorMask>(1 + rng() % 7);
            break;
        case ListMode::RandomSizeLe2: {
            static constexpr ColorMask small_masks[6] = {0b001, 0b010, 0b100, 0b011, 0b101, 0b110};
            for (auto& m : lists) m = small_masks[rng() % 6];
            break;
        }
    }
    return ColoringInstance(std::make_shared<const Graph>(std::move(g)), std::move(lists));
}

}  // namespace tricolor

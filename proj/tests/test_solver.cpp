#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tricolor/gen.hpp"
#include "tricolor/oracle.hpp"
#include "tricolor/solver.hpp"

using namespace tricolor;
using namespace testsupport;

namespace {

SolverConfig config(SolveMode mode, std::uint64_t seed = 0) {
    SolverConfig cfg;
    cfg.mode = mode;
    cfg.rng_seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("solve on named instances") {
    ColoringInstance c5 = full_instance(cycle_graph(5));
    ColoringInstance k4 = full_instance(complete_graph(4));
    ColoringInstance pet = full_instance(petersen_graph());
    REQUIRE(diameter(pet.graph()) == 2);

    for (SolveMode mode : {SolveMode::Complete, SolveMode::Paper, SolveMode::Randomized,
                           SolveMode::BaselineMs, SolveMode::Diam3}) {
        CAPTURE(static_cast<int>(mode));
        SearchOutcome r5 = solve(c5, config(mode, 1));
        REQUIRE(r5.sat());
        REQUIRE(verify(c5, *r5.certificate));
        REQUIRE(!solve(k4, config(mode, 1)).sat());
        SearchOutcome rp = solve(pet, config(mode, 1));
        REQUIRE(rp.sat());
        REQUIRE(verify(pet, *rp.certificate));
    }
}

TEST_CASE("mode preconditions") {
    ColoringInstance p5 = full_instance(path_graph(5));  // diameter 4
    REQUIRE_THROWS_AS(solve(p5, config(SolveMode::Paper)), std::invalid_argument);
    REQUIRE_THROWS_AS(solve(p5, config(SolveMode::Randomized)), std::invalid_argument);
    REQUIRE_THROWS_AS(solve(p5, config(SolveMode::BaselineMs)), std::invalid_argument);
    REQUIRE_THROWS_AS(solve(p5, config(SolveMode::Diam3)), std::invalid_argument);
    REQUIRE(solve(p5, config(SolveMode::Complete)).sat());

    GraphBuilder disconnected(4);
    disconnected.add_edge(0, 1);
    REQUIRE_THROWS_AS(solve(full_instance(disconnected.build()), config(SolveMode::Complete)),
                      std::invalid_argument);

    ColoringInstance c7 = full_instance(cycle_graph(7));  // diameter 3
    REQUIRE(solve(c7, config(SolveMode::Diam3)).sat());
    REQUIRE_THROWS_AS(solve(c7, config(SolveMode::BaselineMs)), std::invalid_argument);
}

TEST_CASE("rule B1 candidate") {
    SECTION("a high-degree star center is picked") {
        ColoringInstance inst = full_instance(star_graph(30));
        LayerStructure ls = layers(inst);
        REQUIRE(ls.measure_diam2 == 31);
        REQUIRE(rule_b1_candidate(inst, ls) == 0);
    }
    SECTION("a bare cycle is below the threshold") {
        ColoringInstance inst = full_instance(cycle_graph(5));
        REQUIRE(!rule_b1_candidate(inst, layers(inst)).has_value());
    }
    SECTION("no candidates without free vertices") {
        ColoringInstance inst = instance_with_lists(path_graph(3), {L12, L12, L12});
        REQUIRE(!rule_b1_candidate(inst, layers(inst)).has_value());
    }
}

TEST_CASE("rule B2 candidate") {
    SECTION("a hub joined to five peers through distinct two-list vertices") {
        // v=0, partners 1..5, midpoints 6..10 with two-element lists
        GraphBuilder b(11);
        for (int i = 0; i < 5; ++i) {
            b.add_edge(0, 6 + i);
            b.add_edge(6 + i, 1 + i);
        }
        std::vector<ColorMask> lists(11, kFullList);
        for (int i = 6; i < 11; ++i) lists[i] = L12;
        ColoringInstance inst(shared(b.build()), std::move(lists));
        LayerStructure ls = layers(inst);
        REQUIRE(ls.measure_diam2 == 6);
        // threshold (1/36) * 6^{2/3} < 1, and all six free vertices qualify
        REQUIRE(rule_b2_candidate(inst, ls) == 0);
    }
    SECTION("no two-list layer, no candidate") {
        ColoringInstance inst = full_instance(cycle_graph(5));
        REQUIRE(!rule_b2_candidate(inst, layers(inst)).has_value());
    }
    SECTION("empty free layer, no candidate") {
        ColoringInstance inst = instance_with_lists(path_graph(2), {L12, L12});
        REQUIRE(!rule_b2_candidate(inst, layers(inst)).has_value());
    }
}

TEST_CASE("rule B3 candidate") {
    SECTION("two vertices whose joint neighborhood reaches many peers") {
        // u=0, v=1 and witnesses 2..7, all joined through hub 8
        GraphBuilder b(9);
        for (int w = 0; w < 8; ++w) b.add_edge(w, 8);
        ColoringInstance inst = full_instance(b.build());
        LayerStructure ls = layers(inst);
        REQUIRE(ls.measure_diam2 == 9);
        // every w in V3 has the hub inside N(0) n N(1) n N(w); 8 >= 9^{2/3}
        auto pair = rule_b3_candidate(inst, ls);
        REQUIRE(pair.has_value());
        REQUIRE(*pair == std::make_pair(0, 1));
    }
    SECTION("triangle-free sparse instance below threshold") {
        ColoringInstance inst = full_instance(cycle_graph(6));
        REQUIRE(!rule_b3_candidate(inst, layers(inst)).has_value());
    }
    SECTION("fewer than two free vertices") {
        ColoringInstance inst = instance_with_lists(path_graph(3), {L12, L123, L12});
        REQUIRE(!rule_b3_candidate(inst, layers(inst)).has_value());
    }
}

TEST_CASE("check_witness") {
    ColoringInstance c5 = full_instance(cycle_graph(5));
    LayerStructure ls = layers(c5);
    SECTION("the free set dominates itself") {
        WitnessTuple w;
        w.s = ls.v3;
        w.s_tilde = VertexSet(5);
        REQUIRE(check_witness(c5, ls, w) == 5);
    }
    SECTION("empty sets dominate nothing") {
        WitnessTuple w;
        w.s = VertexSet(5);
        w.s_tilde = VertexSet(5);
        REQUIRE(check_witness(c5, ls, w) == 0);
    }
    SECTION("two cycle vertices at distance two cover everything") {
        WitnessTuple w;
        w.s = VertexSet::of(5, {0});
        w.s_tilde = VertexSet::of(5, {2});
        // N(S) n N(S~) = {1}; the closed neighborhood of {0,1,2} is all five
        REQUIRE(check_witness(c5, ls, w) == 5);
    }
}

TEST_CASE("witness enumeration") {
    ColoringInstance c5 = full_instance(cycle_graph(5));
    LayerStructure ls = layers(c5);
    SolverConfig cfg = config(SolveMode::Paper);
    cfg.k_const = 2.0;

    SECTION("stream is empty when nothing is free") {
        ColoringInstance fixed = instance_with_lists(path_graph(2), {L12, L12});
        auto e = for_each_witness(fixed, layers(fixed), cfg,
                                  [](const WitnessTuple&, int) { return true; });
        REQUIRE(e.tuples_emitted == 0);
        REQUIRE(e.pairs_checked == 0);
        REQUIRE(!e.truncated);
    }
    SECTION("zero budget truncates immediately") {
        SolverConfig tight = cfg;
        tight.witness_budget = 0;
        auto e = for_each_witness(c5, ls, tight, [](const WitnessTuple&, int) { return true; });
        REQUIRE(e.truncated);
        REQUIRE(e.pairs_checked == 0);
        REQUIRE(e.tuples_emitted == 0);
    }
    SECTION("the documented C5 tuple is emitted and accepted") {
        bool seen = false;
        for_each_witness(c5, ls, cfg, [&](const WitnessTuple& w, int dominated) {
            if (w.color_a == 1 && w.s == VertexSet::of(5, {0}) && w.s_tilde == VertexSet::of(5, {2}) &&
                w.phi.size() == 1 && w.phi[0] == std::make_pair(2, 2)) {
                seen = true;
                REQUIRE(dominated == 5);
            }
            return true;
        });
        REQUIRE(seen);
    }
    SECTION("only accepted tuples reach the visitor") {
        const std::int64_t goal = (ls.measure_diam2 + 5) / 6;
        for_each_witness(c5, ls, cfg, [&](const WitnessTuple&, int dominated) {
            REQUIRE(dominated >= goal);
            return true;
        });
    }
    SECTION("canonical order begins with the smallest sets") {
        std::vector<int> sizes;
        for_each_witness(c5, ls, cfg, [&](const WitnessTuple& w, int) {
            sizes.push_back(w.s.count() * 10 + w.s_tilde.count());
            return sizes.size() < 5;
        });
        REQUIRE(!sizes.empty());
        REQUIRE(sizes.front() <= sizes.back());
    }
}

TEST_CASE("sampling probabilities follow the clamped formulas") {
    SECTION("mu = 1000 clamps the neighbor probability") {
        auto [p, pt] = sampling_probabilities(1000);
        REQUIRE(p == Catch::Approx(0.01));
        REQUIRE(pt == 1.0);  // 100 * 0.1 * log(1000) = 69.08, clamped
    }
    SECTION("mu = 10^6") {
        auto [p, pt] = sampling_probabilities(1000000);
        REQUIRE(p == Catch::Approx(1e-4));
        REQUIRE(pt == 1.0);  // 100 * 0.01 * 13.8155 = 13.8, clamped
    }
    SECTION("mu = 0 yields nothing") {
        auto [p, pt] = sampling_probabilities(0);
        REQUIRE(p == 0.0);
        REQUIRE(pt == 0.0);
        ColoringInstance fixed = instance_with_lists(path_graph(2), {L12, L12});
        std::mt19937_64 rng(1);
        REQUIRE(!sample_witness(fixed, layers(fixed), config(SolveMode::Randomized), rng).has_value());
    }
    SECTION("sampled tuples always pass the domination goal") {
        ColoringInstance pet = full_instance(petersen_graph());
        LayerStructure ls = layers(pet);
        std::mt19937_64 rng(3);
        SolverConfig cfg = config(SolveMode::Randomized);
        cfg.max_retries = 64;
        auto w = sample_witness(pet, ls, cfg, rng);
        if (w) {
            std::int64_t goal = (ls.measure_diam2 + 5) / 6;
            REQUIRE(check_witness(pet, ls, *w) >= goal);
            REQUIRE(!(w->s & w->s_tilde).any());
        }
    }
}

TEST_CASE("paper mode falls back to plain branching when nothing is accepted") {
    // P3 with a two-list end: no rule fires, the size bound allows only
    // empty sets, so the node must be finished by the complete split
    GraphBuilder b(3);
    b.add_edge(0, 1).add_edge(1, 2);
    ColoringInstance inst = instance_with_lists(b.build(), {L12, L123, L123});
    REQUIRE(diameter(inst.graph()) == 2);
    SearchOutcome r = solve(inst, config(SolveMode::Paper));
    REQUIRE(r.sat());
    REQUIRE(r.stats.complete_fallbacks >= 1);
    REQUIRE(verify(inst, *r.certificate));
}

TEST_CASE("progress guarantees hold on random diameter-2 instances") {
    for (int i = 0; i < 40; ++i) {
        GenSpec spec;
        spec.family = GenFamily::RandomDiam2;
        spec.n = 10;
        spec.rng_seed = 100 + static_cast<std::uint64_t>(i);
        spec.list_mode = ListMode::RandomNonempty;
        ColoringInstance inst = generate(spec);
        for (SolveMode mode : {SolveMode::Paper, SolveMode::Randomized}) {
            SearchOutcome r = solve(inst, config(mode, 7));
            REQUIRE(r.stats.progress_violations == 0);
        }
    }
}

TEST_CASE("dominating-set baseline details") {
    SECTION("already-small lists go straight to the 2-SAT finish") {
        GraphBuilder b(4);
        b.add_edge(0, 1).add_edge(1, 2).add_edge(2, 3).add_edge(3, 0);
        ColoringInstance inst = instance_with_lists(b.build(), {L12, L12, L12, L12});
        SearchOutcome r = solve_ms_baseline(inst, config(SolveMode::BaselineMs));
        REQUIRE(r.sat());
        REQUIRE(r.stats.r3 == 1);
    }
    SECTION("single free vertex") {
        ColoringInstance inst = full_instance(GraphBuilder(1).build());
        SearchOutcome r = solve_ms_baseline(inst, config(SolveMode::BaselineMs));
        REQUIRE(r.sat());
    }
    SECTION("an apex instance is decided through a tiny dominating set") {
        GenSpec spec;
        spec.family = GenFamily::UniversalApex;
        spec.n = 40;
        spec.rng_seed = 5;
        ColoringInstance inst = generate(spec);
        SearchOutcome r = solve_ms_baseline(inst, config(SolveMode::BaselineMs));
        REQUIRE((r.verdict == Verdict::Sat || r.verdict == Verdict::Unsat));
        REQUIRE(r.stats.enumeration_assignments <= 81);  // at most 3^4 colorings tried
    }
}

TEST_CASE("degree-branching solver details") {
    SECTION("odd cycle of diameter 3") {
        SearchOutcome r = solve_diam3(full_instance(cycle_graph(7)), config(SolveMode::Diam3));
        REQUIRE(r.sat());
    }
    SECTION("K4 with a pendant vertex is still not colorable") {
        GraphBuilder b(5);
        b.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3).add_edge(1, 2).add_edge(1, 3).add_edge(2, 3);
        b.add_edge(3, 4);
        ColoringInstance inst = full_instance(b.build());
        REQUIRE(diameter(inst.graph()) == 2);
        REQUIRE(!solve_diam3(inst, config(SolveMode::Diam3)).sat());
    }
    SECTION("no free vertices resolves by the final reduction alone") {
        ColoringInstance inst = instance_with_lists(path_graph(3), {L12, L23, L12});
        SearchOutcome r = solve_diam3(inst, config(SolveMode::Diam3));
        REQUIRE(r.sat());
        REQUIRE(r.stats.r3 == 1);
        REQUIRE(r.stats.deg_branches == 0);
    }
    SECTION("rejects diameter 4") {
        REQUIRE_THROWS_AS(solve_diam3(full_instance(path_graph(5)), config(SolveMode::Diam3)),
                          std::invalid_argument);
    }
}

TEST_CASE("timeout surfaces as a verdict") {
    SolverConfig cfg = config(SolveMode::Complete);
    cfg.time_limit_seconds = 1e-9;
    SearchOutcome r = solve(full_instance(cycle_graph(25)), cfg);
    REQUIRE(r.verdict == Verdict::Timeout);
}

TEST_CASE("all modes agree with the oracle on small connected graphs") {
    std::mt19937_64 rng(71);
    for (int n = 1; n <= 4; ++n) {
        for (const Graph& g : all_connected_graphs(n)) {
            auto gp = std::make_shared<const Graph>(g);
            auto diam = diameter(g);
            for (int rep = 0; rep < 6; ++rep) {
                ColoringInstance inst(gp, random_nonempty_lists(n, rng));
                bool expected = brute_color(inst).sat;
                REQUIRE(solve(inst, config(SolveMode::Complete)).sat() == expected);
                if (*diam <= 2) {
                    REQUIRE(solve(inst, config(SolveMode::Paper)).sat() == expected);
                    REQUIRE(solve(inst, config(SolveMode::Randomized, rep)).sat() == expected);
                    REQUIRE(solve(inst, config(SolveMode::BaselineMs)).sat() == expected);
                }
                if (*diam <= 3) REQUIRE(solve(inst, config(SolveMode::Diam3)).sat() == expected);
            }
        }
    }
}

TEST_CASE("identical runs are bit-identical and thread-independent") {
    GenSpec spec;
    spec.family = GenFamily::RandomDiam2;
    spec.n = 11;
    spec.rng_seed = 17;
    spec.list_mode = ListMode::RandomNonempty;
    ColoringInstance inst = generate(spec);

    for (SolveMode mode : {SolveMode::Complete, SolveMode::Paper, SolveMode::Randomized,
                           SolveMode::BaselineMs, SolveMode::Diam3}) {
        SolverConfig cfg = config(mode, 3);
        SearchOutcome a = solve(inst, cfg);
        SearchOutcome b = solve(inst, cfg);
        SolverConfig threaded = cfg;
        threaded.threads = 4;
        SearchOutcome c = solve(inst, threaded);
        REQUIRE(a.verdict == b.verdict);
        REQUIRE(a.certificate == b.certificate);
        REQUIRE(a.stats.nodes_expanded == b.stats.nodes_expanded);
        REQUIRE(a.verdict == c.verdict);
        REQUIRE(a.certificate == c.certificate);
        REQUIRE(a.stats.nodes_expanded == c.stats.nodes_expanded);
        REQUIRE(a.stats.b1 == c.stats.b1);
        REQUIRE(a.stats.b4 == c.stats.b4);
    }
}

TEST_CASE("rule precedence: the witness stage only runs when no rule fires") {
    // star: B1 fires at the root, so no witness pair is ever checked there
    ColoringInstance star = full_instance(star_graph(30));
    SearchOutcome r = solve(star, config(SolveMode::Paper));
    REQUIRE(r.sat());
    REQUIRE(r.stats.b1 >= 1);
}

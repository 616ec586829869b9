#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "tricolor/gen.hpp"
#include "tricolor/io.hpp"

using namespace tricolor;
using namespace testsupport;

TEST_CASE("generator family contracts") {
    SECTION("universal apex stays within diameter 2") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            GenSpec spec;
            spec.family = GenFamily::UniversalApex;
            spec.n = 12;
            spec.rng_seed = seed;
            ColoringInstance inst = generate(spec);
            REQUIRE(inst.vertex_count() == 12);
            REQUIRE(*diameter(inst.graph()) <= 2);
        }
    }
    SECTION("cycles have the expected diameter") {
        GenSpec spec;
        spec.family = GenFamily::Cycle;
        spec.n = 7;
        ColoringInstance inst = generate(spec);
        REQUIRE(inst.vertex_count() == 7);
        REQUIRE(diameter(inst.graph()) == 3);
    }
    SECTION("diameter-2 rejection sampling delivers exactly 2") {
        GenSpec spec;
        spec.family = GenFamily::RandomDiam2;
        spec.n = 50;
        spec.rng_seed = 1;
        REQUIRE(diameter(generate(spec).graph()) == 2);
    }
    SECTION("diameter-3 rejection sampling delivers exactly 3") {
        GenSpec spec;
        spec.family = GenFamily::RandomDiam3;
        spec.n = 12;
        spec.rng_seed = 4;
        REQUIRE(diameter(generate(spec).graph()) == 3);
    }
    SECTION("petersen is the fixed 3-regular 10-vertex graph") {
        GenSpec spec;
        spec.family = GenFamily::Petersen;
        ColoringInstance inst = generate(spec);
        REQUIRE(inst.vertex_count() == 10);
        REQUIRE(inst.graph().edge_count() == 15);
        for (int v = 0; v < 10; ++v) REQUIRE(inst.graph().degree(v) == 3);
        REQUIRE(diameter(inst.graph()) == 2);
    }
    SECTION("impossible diameter target fails loudly") {
        GenSpec spec;
        spec.family = GenFamily::RandomDiam2;
        spec.n = 2;  // K2 has diameter 1, anything else is disconnected
        REQUIRE_THROWS_AS(generate(spec), GenerationFailed);
    }
}

TEST_CASE("list modes") {
    GenSpec spec;
    spec.family = GenFamily::Cycle;
    spec.n = 30;
    spec.rng_seed = 9;
    SECTION("full lists") {
        spec.list_mode = ListMode::Full;
        ColoringInstance inst = generate(spec);
        for (int v = 0; v < inst.vertex_count(); ++v) REQUIRE(inst.list(v) == kFullList);
    }
    SECTION("random nonempty lists are nonempty") {
        spec.list_mode = ListMode::RandomNonempty;
        ColoringInstance inst = generate(spec);
        bool not_all_full = false;
        for (int v = 0; v < inst.vertex_count(); ++v) {
            REQUIRE(mask_size(inst.list(v)) >= 1);
            if (inst.list(v) != kFullList) not_all_full = true;
        }
        REQUIRE(not_all_full);
    }
    SECTION("small lists are capped at two colors") {
        spec.list_mode = ListMode::RandomSizeLe2;
        ColoringInstance inst = generate(spec);
        for (int v = 0; v < inst.vertex_count(); ++v) {
            REQUIRE(mask_size(inst.list(v)) >= 1);
            REQUIRE(mask_size(inst.list(v)) <= 2);
        }
    }
}

TEST_CASE("generation is reproducible byte for byte") {
    GenSpec spec;
    spec.family = GenFamily::RandomDiam2;
    spec.n = 14;
    spec.rng_seed = 77;
    spec.list_mode = ListMode::RandomNonempty;
    std::string a = serialize(generate(spec));
    std::string b = serialize(generate(spec));
    REQUIRE(a == b);
    spec.rng_seed = 78;
    REQUIRE(serialize(generate(spec)) != a);
}

TEST_CASE("spec validation") {
    GenSpec spec;
    spec.n = 0;
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
    spec.n = 5;
    spec.edge_prob = 1.5;
    REQUIRE_THROWS_AS(generate(spec), std::invalid_argument);
}

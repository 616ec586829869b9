#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "test_support.hpp"
#include "tricolor/cli.hpp"
#include "tricolor/io.hpp"

using namespace tricolor;
using namespace testsupport;

namespace {

int run_cli(std::initializer_list<const char*> args, const std::string& input, std::string& out,
            std::string& err) {
    std::vector<const char*> argv{"tricolor"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::istringstream in(input);
    std::ostringstream out_stream, err_stream;
    int code = cli_main(static_cast<int>(argv.size()), argv.data(), in, out_stream, err_stream);
    out = out_stream.str();
    err = err_stream.str();
    return code;
}

const char* kC5File =
    "c a five-cycle\n"
    "p col 5 5\n"
    "e 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";

const char* kK4File =
    "p col 4 6\n"
    "e 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";

}  // namespace

TEST_CASE("parse basics") {
    SECTION("no list lines means full lists") {
        ParsedInstance p = parse_instance_text(kC5File);
        REQUIRE(p.graph.vertex_count() == 5);
        REQUIRE(p.graph.edge_count() == 5);
        REQUIRE(p.color_count == 3);
        REQUIRE(!p.is_hom());
        for (HomMask m : p.lists) REQUIRE(m == 0b111);
        REQUIRE(p.warnings.empty());
    }
    SECTION("a list line narrows one vertex") {
        ParsedInstance p = parse_instance_text("p col 2 1\ne 1 2\nl 1 2\n");
        REQUIRE(p.lists[0] == 0b010);
        REQUIRE(p.lists[1] == 0b111);
    }
    SECTION("CRLF and trailing blanks are accepted") {
        ParsedInstance p = parse_instance_text("p col 2 1\r\ne 1 2   \r\n\r\n");
        REQUIRE(p.graph.edge_count() == 1);
    }
    SECTION("duplicate edges warn and dedupe") {
        ParsedInstance p = parse_instance_text("p col 2 1\ne 1 2\ne 2 1\n");
        REQUIRE(p.graph.edge_count() == 1);
        REQUIRE(p.warnings.size() == 1);
        REQUIRE(p.warnings[0].find("duplicate edge") != std::string::npos);
    }
    SECTION("declared/actual edge mismatch warns") {
        ParsedInstance p = parse_instance_text("p col 2 5\ne 1 2\n");
        REQUIRE(p.warnings.size() == 1);
    }
}

TEST_CASE("parse errors carry line numbers") {
    SECTION("vertex id out of range") {
        try {
            parse_instance_text("p col 5 1\ne 1 9\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            REQUIRE(e.line() == 2);
        }
    }
    SECTION("empty list") {
        try {
            parse_instance_text("p col 2 0\nl 1\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            REQUIRE(e.line() == 2);
        }
    }
    SECTION("unknown line type") {
        REQUIRE_THROWS_AS(parse_instance_text("p col 1 0\nq zzz\n"), ParseError);
    }
    SECTION("loop outside a target section") {
        REQUIRE_THROWS_AS(parse_instance_text("p col 2 1\ne 1 1\n"), ParseError);
    }
    SECTION("edge before the problem line") {
        REQUIRE_THROWS_AS(parse_instance_text("e 1 2\np col 2 1\n"), ParseError);
    }
    SECTION("color out of range") {
        REQUIRE_THROWS_AS(parse_instance_text("p col 2 1\ne 1 2\nl 1 4\n"), ParseError);
    }
    SECTION("malformed number") {
        REQUIRE_THROWS_AS(parse_instance_text("p col 2 1\ne 1 x\n"), ParseError);
    }
}

TEST_CASE("target sections") {
    const char* text =
        "p col 3 2\n"
        "e 1 2\ne 2 3\n"
        "l 1 1 2\n"
        "t 3\n"
        "e 1 2\ne 2 3\ne 1 1\ne 3 3\n";
    ParsedInstance p = parse_instance_text(text);
    REQUIRE(p.is_hom());
    REQUIRE(p.color_count == 3);
    REQUIRE(p.target->has_loop(0));
    REQUIRE(p.target->has_loop(2));
    HomInstance inst = to_hom_instance(p);
    REQUIRE(inst.target().p1());
    REQUIRE(inst.list(0) == (hom_bit(0) | hom_bit(1)));
    SECTION("coloring conversion refuses a hom file") {
        REQUIRE_THROWS_AS(to_coloring_instance(p), std::invalid_argument);
    }
}

TEST_CASE("serialize then parse is the identity on the structure") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 7);
        GraphBuilder b(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 2) b.add_edge(u, v);
        std::vector<ColorMask> lists(static_cast<std::size_t>(n));
        for (auto& m : lists) m = static_cast<ColorMask>(1 + rng() % 7);
        ColoringInstance inst(shared(b.build()), std::move(lists));
        std::string text = serialize(inst);
        ColoringInstance round = to_coloring_instance(parse_instance_text(text));
        REQUIRE(serialize(round) == text);
        REQUIRE(round.lists() == inst.lists());
    }
}

TEST_CASE("hom serialize round-trip") {
    auto t = std::make_shared<const TargetGraph>(TargetGraph::looped_path(3));
    HomInstance inst = HomInstance::with_full_lists(shared(cycle_graph(4)), t);
    inst.set_list(2, hom_bit(0) | hom_bit(2));
    std::string text = serialize(inst);
    HomInstance round = to_hom_instance(parse_instance_text(text));
    REQUIRE(serialize(round) == text);
}

TEST_CASE("named targets") {
    auto c5 = parse_target_name("C5");
    REQUIRE(c5.has_value());
    REQUIRE(c5->color_count() == 5);
    REQUIRE(c5->p3());
    auto ps4 = parse_target_name("pstar4");
    REQUIRE(ps4.has_value());
    REQUIRE(ps4->color_count() == 4);
    REQUIRE(!ps4->p3());
    REQUIRE(!parse_target_name("K4").has_value());
    REQUIRE(!parse_target_name("C2").has_value());
}

TEST_CASE("cli solve") {
    std::string out, err;
    SECTION("SAT prints the verdict and a coloring, exit 0") {
        int code = run_cli({"solve", "-", "--mode", "complete"}, kC5File, out, err);
        REQUIRE(code == 0);
        REQUIRE(out.rfind("SAT\n", 0) == 0);
        std::istringstream lines(out);
        std::string verdict, coloring;
        std::getline(lines, verdict);
        std::getline(lines, coloring);
        ParsedInstance p = parse_instance_text(kC5File);
        ColoringInstance inst = to_coloring_instance(p);
        Coloring c;
        std::istringstream cs(coloring);
        for (int x; cs >> x;) c.push_back(x);
        REQUIRE(verify(inst, c));
    }
    SECTION("UNSAT exits 20") {
        int code = run_cli({"solve", "--mode", "baseline-ms"}, kK4File, out, err);
        REQUIRE(code == 20);
        REQUIRE(out == "UNSAT\n");
    }
    SECTION("stats are key=value lines") {
        int code = run_cli({"solve", "--stats"}, kC5File, out, err);
        REQUIRE(code == 0);
        REQUIRE(out.find("nodes=") != std::string::npos);
        REQUIRE(out.find("b4=") != std::string::npos);
        REQUIRE(out.find("ms=") != std::string::npos);
    }
    SECTION("unknown flags exit 1") {
        int code = run_cli({"solve", "--bogus"}, kC5File, out, err);
        REQUIRE(code == 1);
    }
    SECTION("unreadable file exits 1") {
        int code = run_cli({"solve", "/nonexistent/file.col"}, "", out, err);
        REQUIRE(code == 1);
        REQUIRE(err.find("error:") != std::string::npos);
    }
    SECTION("parse errors report the line") {
        int code = run_cli({"solve"}, "p col 2 1\ne 1 9\n", out, err);
        REQUIRE(code == 1);
        REQUIRE(err.find("line 2") != std::string::npos);
    }
}

TEST_CASE("cli hom and oracle") {
    std::string out, err;
    const char* k3 = "p col 3 3\ne 1 2\ne 2 3\ne 1 3\n";
    SECTION("hom with a named target") {
        REQUIRE(run_cli({"hom", "--target", "C5"}, k3, out, err) == 20);
        REQUIRE(run_cli({"hom", "--target", "C3"}, k3, out, err) == 0);
    }
    SECTION("oracle reports counts") {
        int code = run_cli({"oracle"}, kC5File, out, err);
        REQUIRE(code == 0);
        REQUIRE(out.find("count=30") != std::string::npos);
        REQUIRE(out.find("witness=") != std::string::npos);
    }
    SECTION("hom oracle over a named target") {
        int code = run_cli({"oracle", "--target", "C3"}, "p col 2 1\ne 1 2\n", out, err);
        REQUIRE(code == 0);
        REQUIRE(out.find("count=6") != std::string::npos);
    }
}

TEST_CASE("cli gen and bench") {
    std::string out, err;
    SECTION("gen emits a parseable instance") {
        int code = run_cli({"gen", "--family", "cycle", "--n", "7", "--seed", "3"}, "", out, err);
        REQUIRE(code == 0);
        ParsedInstance p = parse_instance_text(out);
        REQUIRE(p.graph.vertex_count() == 7);
        REQUIRE(diameter(p.graph) == 3);
    }
    SECTION("gen piped into solve") {
        std::string instance, ignored;
        REQUIRE(run_cli({"gen", "--family", "cycle", "--n", "7"}, "", instance, ignored) == 0);
        REQUIRE(run_cli({"solve", "--mode", "diam3"}, instance, out, err) == 0);
        REQUIRE(out.rfind("SAT\n", 0) == 0);
    }
    SECTION("bench emits the fixed CSV header") {
        int code = run_cli({"bench", "--family", "cycle", "--n-list", "5,7", "--reps", "1", "--mode",
                            "complete"},
                           "", out, err);
        REQUIRE(code == 0);
        REQUIRE(out.rfind("family,n,seed,mode,verdict,nodes,b1,b2,b3,b4,ms\n", 0) == 0);
        int lines = 0;
        for (char ch : out)
            if (ch == '\n') ++lines;
        REQUIRE(lines == 3);  // header + one row per size
    }
}

TEST_CASE("cli sweep is clean on a small family") {
    std::string out, err;
    int code = run_cli({"sweep", "--max-n", "3", "--assignments", "2", "--rand-count", "2", "--rand-n",
                        "7", "--seed", "5"},
                       "", out, err);
    REQUIRE(code == 0);
    REQUIRE(out.find("disagreements=0") != std::string::npos);
}

TEST_CASE("cli dump-cnf") {
    std::string out, err;
    // all lists have two colors after parsing, so the encoding exists
    const char* text = "p col 3 2\ne 1 2\ne 2 3\nl 1 1 2\nl 2 1 2\nl 3 1 2\n";
    int code = run_cli({"solve", "-", "--dump-cnf", "-"}, text, out, err);
    REQUIRE(code == 0);
    REQUIRE(out.find("p cnf") != std::string::npos);
}

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tricolor/homsolver.hpp"
#include "tricolor/instance.hpp"

namespace tricolor {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Result of parsing an instance file. Lists are stored as masks over the
/// color universe: 3 colors unless a target section (or hint) raises it.
struct ParsedInstance {
    Graph graph;
    std::vector<HomMask> lists;
    int color_count = 3;
    std::optional<Graph> target;  // present when the file has a `t` section
    std::vector<std::string> warnings;

    bool is_hom() const { return target.has_value(); }
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline long long parse_int(std::string_view tok, int line, const char* what) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
    return value;
}

}  // namespace detail

/// Instance file grammar:
///   c <comment>                      anywhere
///   p col <n> <m>                    exactly once, before edges and lists
///   e <u> <v>                        1-based; u = v only inside a target section
///   l <v> <c1> [<c2> ...]            list of vertex v (absent line = full list)
///   t <k>                            opens the target section; its `e` lines
///                                    describe the k-vertex target graph
/// LF or CRLF line endings; trailing whitespace is ignored.
/// `color_hint` widens the color universe for list validation when the
/// caller will attach a target out of band.
inline ParsedInstance parse_instance_text(std::string_view text, std::optional<int> color_hint = std::nullopt) {
    ParsedInstance out;
    int n = -1;
    long long declared_edges = 0;
    bool in_target = false;
    int target_k = 0;
    std::optional<GraphBuilder> graph_builder;
    std::optional<GraphBuilder> target_builder;
    struct ListLine {
        int line;
        int vertex;
        std::vector<long long> colors;
    };
    std::vector<ListLine> list_lines;
    long long main_edges = 0;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto tokens = detail::split_tokens(line);
        if (tokens.empty()) continue;
        std::string_view kind = tokens[0];
        if (kind == "c") continue;

        if (kind == "p") {
            if (n >= 0) throw ParseError(line_no, "duplicate problem line");
            if (tokens.size() != 4 || tokens[1] != "col")
                throw ParseError(line_no, "expected 'p col <n> <m>'");
            long long nn = detail::parse_int(tokens[2], line_no, "vertex count");
            declared_edges = detail::parse_int(tokens[3], line_no, "edge count");
            if (nn < 0) throw ParseError(line_no, "negative vertex count");
            n = static_cast<int>(nn);
            graph_builder.emplace(n, false);
            continue;
        }
        if (n < 0) throw ParseError(line_no, "'" + std::string(kind) + "' line before the problem line");

        if (kind == "t") {
            if (in_target) throw ParseError(line_no, "duplicate target section");
            if (tokens.size() != 2) throw ParseError(line_no, "expected 't <k>'");
            long long k = detail::parse_int(tokens[1], line_no, "target size");
            if (k < 1 || k > 64) throw ParseError(line_no, "target size must be in 1..64");
            in_target = true;
            target_k = static_cast<int>(k);
            target_builder.emplace(target_k, true);
            continue;
        }
        if (kind == "e") {
            if (tokens.size() != 3) throw ParseError(line_no, "expected 'e <u> <v>'");
            long long u = detail::parse_int(tokens[1], line_no, "vertex id");
            long long v = detail::parse_int(tokens[2], line_no, "vertex id");
            int limit = in_target ? target_k : n;
            if (u < 1 || u > limit || v < 1 || v > limit)
                throw ParseError(line_no, "vertex id out of range");
            GraphBuilder& b = in_target ? *target_builder : *graph_builder;
            if (u == v && !in_target) throw ParseError(line_no, "loop outside the target section");
            if (b.has_edge(static_cast<int>(u - 1), static_cast<int>(v - 1))) {
                out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate edge ignored");
            } else {
                b.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
                if (!in_target) ++main_edges;
            }
            continue;
        }
        if (kind == "l") {
            if (in_target) throw ParseError(line_no, "list line inside the target section");
            if (tokens.size() < 2) throw ParseError(line_no, "expected 'l <v> <c...>'");
            long long v = detail::parse_int(tokens[1], line_no, "vertex id");
            if (v < 1 || v > n) throw ParseError(line_no, "vertex id out of range");
            if (tokens.size() == 2) throw ParseError(line_no, "empty list");
            ListLine ll{line_no, static_cast<int>(v - 1), {}};
            for (std::size_t i = 2; i < tokens.size(); ++i)
                ll.colors.push_back(detail::parse_int(tokens[i], line_no, "color"));
            list_lines.push_back(std::move(ll));
            continue;
        }
        throw ParseError(line_no, "unknown line type '" + std::string(kind) + "'");
    }

    if (n < 0) throw ParseError(line_no, "missing problem line");
    out.color_count = in_target ? target_k : std::max(3, color_hint.value_or(3));
    if (main_edges != declared_edges)
        out.warnings.push_back("declared edge count " + std::to_string(declared_edges) + " but found " +
                               std::to_string(main_edges));

    out.graph = graph_builder->build();
    if (in_target) out.target = target_builder->build();
    HomMask full = out.color_count == 64 ? ~HomMask{0} : (hom_bit(out.color_count) - 1);
    out.lists.assign(static_cast<std::size_t>(n), full);
    for (const auto& ll : list_lines) {
        HomMask m = 0;
        for (long long c : ll.colors) {
            if (c < 1 || c > out.color_count) throw ParseError(ll.line, "color out of range");
            m |= hom_bit(static_cast<int>(c - 1));
        }
        out.lists[static_cast<std::size_t>(ll.vertex)] = m;
    }
    return out;
}

inline ColoringInstance to_coloring_instance(const ParsedInstance& parsed) {
    if (parsed.is_hom())
        throw std::invalid_argument("to_coloring_instance: file declares a homomorphism target");
    std::vector<ColorMask> lists;
    lists.reserve(parsed.lists.size());
    for (HomMask m : parsed.lists) {
        if (m & ~HomMask{0b111})
            throw std::invalid_argument("to_coloring_instance: color above 3 in a list");
        lists.push_back(static_cast<ColorMask>(m));
    }
    return ColoringInstance(std::make_shared<const Graph>(parsed.graph), std::move(lists));
}

/// Callers supplying an out-of-band target should have parsed the file
/// with `color_hint` set to that target's size, so that absent list lines
/// defaulted to the right full universe.
inline HomInstance to_hom_instance(const ParsedInstance& parsed,
                                   std::shared_ptr<const TargetGraph> target_override = nullptr) {
    std::shared_ptr<const TargetGraph> target = std::move(target_override);
    if (!target) {
        if (!parsed.is_hom())
            throw std::invalid_argument("to_hom_instance: no target section and no named target");
        target = std::make_shared<const TargetGraph>(TargetGraph(*parsed.target, "file"));
    }
    std::vector<HomMask> lists = parsed.lists;
    HomMask full = target->full_mask();
    for (HomMask& m : lists)
        if (m & ~full) throw std::invalid_argument("to_hom_instance: list color outside the target");
    return HomInstance(std::make_shared<const Graph>(parsed.graph), std::move(lists), std::move(target));
}

/// Named target shorthand: C<k> or PSTAR<k> (case-insensitive).
inline std::optional<TargetGraph> parse_target_name(std::string_view name) {
    std::string upper;
    for (char ch : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    auto tail_int = [](std::string_view s) -> std::optional<int> {
        if (s.empty()) return std::nullopt;
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
        return v;
    };
    if (upper.size() > 1 && upper[0] == 'C') {
        if (auto k = tail_int(std::string_view(upper).substr(1)); k && *k >= 3)
            return TargetGraph::cycle(*k);
    }
    if (upper.size() > 5 && upper.rfind("PSTAR", 0) == 0) {
        if (auto k = tail_int(std::string_view(upper).substr(5)); k && *k >= 3)
            return TargetGraph::looped_path(*k);
    }
    return std::nullopt;
}

namespace detail {

inline void serialize_graph_edges(const Graph& g, std::string& out) {
    for (int u = 0; u < g.vertex_count(); ++u) {
        g.neighbors(u).for_each([&](int v) {
            if (v >= u)
                out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
        });
    }
}

}  // namespace detail

/// Canonical text form: sorted edges, list lines only for non-full lists.
inline std::string serialize(const ColoringInstance& inst) {
    std::string out = "p col " + std::to_string(inst.vertex_count()) + " " +
                      std::to_string(inst.graph().edge_count()) + "\n";
    detail::serialize_graph_edges(inst.graph(), out);
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (inst.list(v) == kFullList) continue;
        out += "l " + std::to_string(v + 1);
        for (int c = 1; c <= 3; ++c)
            if (mask_has(inst.list(v), c)) out += " " + std::to_string(c);
        out += "\n";
    }
    return out;
}

inline std::string serialize(const HomInstance& inst) {
    std::string out = "p col " + std::to_string(inst.vertex_count()) + " " +
                      std::to_string(inst.graph().edge_count()) + "\n";
    detail::serialize_graph_edges(inst.graph(), out);
    HomMask full = inst.target().full_mask();
    for (int v = 0; v < inst.vertex_count(); ++v) {
        if (inst.list(v) == full) continue;
        out += "l " + std::to_string(v + 1);
        for (int c = 0; c < inst.target().color_count(); ++c)
            if (hom_mask_has(inst.list(v), c)) out += " " + std::to_string(c + 1);
        out += "\n";
    }
    out += "t " + std::to_string(inst.target().color_count()) + "\n";
    detail::serialize_graph_edges(inst.target().graph(), out);
    return out;
}

}  // namespace tricolor

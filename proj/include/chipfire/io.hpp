#pragma once

// Line-oriented text format for graphs and divisors.
//
//   # comment
//   graph <n>
//   edge <u> <v> [<length>]        lengths are p or p/q, on all edges or none
//   divisor <name> <tokens...>
//
// Divisor tokens are either n integers (one per vertex) or metric points
// `v:<i>` / `e:<edge>@<p>/<q>`, each optionally followed by `=<weight>`.

#include "chipfire/metric.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chipfire {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

struct NamedDivisor {
    std::string name;
    std::string text;
};

struct GraphFile {
    Graph graph;
    std::optional<std::vector<Rational>> lengths;
    std::vector<NamedDivisor> divisors;

    bool is_metric() const noexcept { return lengths.has_value(); }
    /// The metric graph, with unit lengths when none were given.
    MetricGraph metric() const { return lengths ? MetricGraph(graph, *lengths) : MetricGraph::unit(graph); }

    const NamedDivisor* find(std::string_view name) const {
        for (const auto& d : divisors)
            if (d.name == name)
                return &d;
        return nullptr;
    }
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i >= line.size() || line[i] == '#')
            break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s) {
    Int value{};
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return value;
}

} // namespace detail

inline GraphFile parse_graph(std::string_view text) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::vector<std::optional<Rational>> lengths;
    std::vector<std::size_t> edge_lines;
    std::vector<NamedDivisor> divisors;
    std::size_t line_no = 0;
    std::size_t header_line = 0;

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto toks = detail::tokenize(line);
        if (toks.empty())
            continue;
        const auto& kw = toks[0];
        auto fail = [&](const detail::Token& t, const std::string& msg) -> ParseError {
            return ParseError(line_no, t.column, msg);
        };
        auto vertex = [&](const detail::Token& t) {
            const auto v = detail::parse_int<std::size_t>(t.text);
            if (!v)
                throw fail(t, "expected a vertex index, got '" + std::string(t.text) + "'");
            if (*v >= *n)
                throw fail(t, "vertex " + std::string(t.text) + " out of range");
            return *v;
        };
        if (kw.text == "graph") {
            if (n)
                throw fail(kw, "duplicate graph header");
            if (toks.size() != 2)
                throw fail(kw, "expected 'graph <n>'");
            const auto v = detail::parse_int<std::size_t>(toks[1].text);
            if (!v || *v == 0)
                throw fail(toks[1], "vertex count must be a positive integer");
            n = *v;
            header_line = line_no;
        } else if (kw.text == "edge") {
            if (!n)
                throw fail(kw, "edge before graph header");
            if (toks.size() != 3 && toks.size() != 4)
                throw fail(kw, "expected 'edge <u> <v> [<length>]'");
            const Vertex u = vertex(toks[1]);
            const Vertex v = vertex(toks[2]);
            if (u == v)
                throw fail(toks[2], "loop edge at vertex " + std::to_string(u));
            std::optional<Rational> len;
            if (toks.size() == 4) {
                try {
                    len = parse_rational(toks[3].text);
                } catch (const std::exception&) {
                    throw fail(toks[3], "malformed length '" + std::string(toks[3].text) + "'");
                }
                if (*len <= 0)
                    throw fail(toks[3], "edge length must be positive");
            }
            edges.push_back({u, v});
            lengths.push_back(len);
            edge_lines.push_back(line_no);
        } else if (kw.text == "divisor") {
            if (!n)
                throw fail(kw, "divisor before graph header");
            if (toks.size() < 2)
                throw fail(kw, "expected 'divisor <name> <values...>'");
            std::string body;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                if (i > 2)
                    body += ' ';
                body += toks[i].text;
            }
            divisors.push_back({std::string(toks[1].text), std::move(body)});
        } else {
            throw fail(kw, "unknown directive '" + std::string(kw.text) + "'");
        }
    }
    if (!n)
        throw ParseError(line_no + 1, 1, "missing 'graph <n>' header");

    std::size_t with_len = 0;
    for (const auto& l : lengths)
        with_len += l.has_value();
    if (with_len != 0 && with_len != lengths.size()) {
        for (std::size_t e = 0; e < lengths.size(); ++e)
            if (!lengths[e])
                throw ParseError(edge_lines[e], 1, "edge lengths must be given on every edge or on none");
    }
    try {
        GraphFile out{Graph(*n, std::move(edges)), std::nullopt, std::move(divisors)};
        if (with_len != 0) {
            std::vector<Rational> ls;
            for (auto& l : lengths)
                ls.push_back(std::move(*l));
            out.lengths = std::move(ls);
        }
        return out;
    } catch (const GraphError& e) {
        throw ParseError(header_line, 1, e.what());
    }
}

inline GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

inline std::string serialize(const GraphFile& f) {
    std::string out = "graph " + std::to_string(f.graph.n()) + "\n";
    for (EdgeIndex e = 0; e < f.graph.m(); ++e) {
        const Edge& ed = f.graph.edge(e);
        out += "edge " + std::to_string(ed.u) + " " + std::to_string(ed.v);
        if (f.lengths)
            out += " " + (*f.lengths)[e].get_str();
        out += "\n";
    }
    for (const auto& d : f.divisors)
        out += "divisor " + d.name + (d.text.empty() ? "" : " " + d.text) + "\n";
    return out;
}

/// n whitespace-separated integers.
inline Divisor parse_divisor(std::string_view text, std::size_t n) {
    const auto toks = detail::tokenize(text);
    if (toks.size() != n)
        throw ParseError(1, toks.empty() ? 1 : toks.back().column,
                         "expected " + std::to_string(n) + " integers, got " + std::to_string(toks.size()));
    Divisor d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = detail::parse_int<std::int64_t>(toks[i].text);
        if (!v)
            throw ParseError(1, toks[i].column, "expected an integer, got '" + std::string(toks[i].text) + "'");
        d[i] = *v;
    }
    return d;
}

/// `v:<i>` or `e:<edge>@<offset>`, canonicalized.
inline GraphPoint parse_point(std::string_view text, const MetricGraph& g, std::size_t column = 1) {
    auto bad = [&](const std::string& why) { return ParseError(1, column, why + ": '" + std::string(text) + "'"); };
    if (text.starts_with("v:")) {
        const auto v = detail::parse_int<std::size_t>(text.substr(2));
        if (!v)
            throw bad("malformed vertex point");
        if (*v >= g.n())
            throw bad("vertex out of range");
        return GraphPoint::at_vertex(*v);
    }
    if (text.starts_with("e:")) {
        const auto at = text.find('@');
        if (at == std::string_view::npos)
            throw bad("edge point needs '@<offset>'");
        const auto e = detail::parse_int<std::size_t>(text.substr(2, at - 2));
        if (!e)
            throw bad("malformed edge index");
        if (*e >= g.m())
            throw bad("edge out of range");
        Rational off;
        try {
            off = parse_rational(text.substr(at + 1));
        } catch (const std::exception&) {
            throw bad("malformed offset");
        }
        if (off < 0 || off > g.length(*e))
            throw bad("offset outside the edge");
        return point_on_edge(g, *e, off);
    }
    // A bare integer is a vertex.
    const auto v = detail::parse_int<std::size_t>(text);
    if (v && *v < g.n())
        return GraphPoint::at_vertex(*v);
    throw bad("expected v:<i>, e:<edge>@<offset> or a vertex index");
}

/// Metric divisor from point tokens, or from n integers for a vertex-supported one.
inline MetricDivisor parse_metric_divisor(std::string_view text, const MetricGraph& g) {
    const auto toks = detail::tokenize(text);
    const bool plain = !toks.empty() && std::all_of(toks.begin(), toks.end(), [](const detail::Token& t) {
        return t.text.find(':') == std::string_view::npos;
    });
    if (plain)
        return metric_divisor(parse_divisor(text, g.n()));
    MetricDivisor d;
    for (const auto& t : toks) {
        std::string_view pt = t.text;
        std::int64_t w = 1;
        if (const auto eq = pt.find('='); eq != std::string_view::npos) {
            const auto k = detail::parse_int<std::int64_t>(pt.substr(eq + 1));
            if (!k)
                throw ParseError(1, t.column + eq + 1, "malformed weight in '" + std::string(t.text) + "'");
            w = *k;
            pt = pt.substr(0, eq);
        }
        d.add(parse_point(pt, g, t.column), w);
    }
    return d;
}

inline std::string format_divisor(const Divisor& d) {
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(d[i]);
    }
    return out;
}

inline std::string format_metric_divisor(const MetricDivisor& d) {
    std::string out;
    for (const auto& [p, k] : d) {
        if (!out.empty())
            out += ' ';
        out += to_string(p) + "=" + std::to_string(k);
    }
    return out;
}

} // namespace chipfire

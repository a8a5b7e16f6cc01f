#pragma once

// Metric graphs with rational edge lengths: points, divisors, tropical
// rational functions and their Laplacian, and subdivisions at finite point
// sets. All arithmetic is exact.

#include "chipfire/graph.hpp"
#include "chipfire/number.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chipfire {

class MetricGraph {
public:
    MetricGraph(Graph g, std::vector<Rational> lengths) : g_(std::move(g)), lengths_(std::move(lengths)) {
        if (lengths_.size() != g_.m())
            throw GraphError("metric graph needs one length per edge");
        for (EdgeIndex e = 0; e < lengths_.size(); ++e) {
            lengths_[e].canonicalize();
            if (lengths_[e] <= 0)
                throw GraphError("edge " + std::to_string(e) + " has nonpositive length");
        }
    }

    static MetricGraph unit(Graph g) {
        std::vector<Rational> ones(g.m(), Rational(1));
        return MetricGraph(std::move(g), std::move(ones));
    }

    const Graph& graph() const noexcept { return g_; }
    std::size_t n() const noexcept { return g_.n(); }
    std::size_t m() const noexcept { return g_.m(); }
    const Rational& length(EdgeIndex e) const { return lengths_.at(e); }
    const std::vector<Rational>& lengths() const noexcept { return lengths_; }

    Rational total_length() const {
        Rational out = 0;
        for (const auto& l : lengths_)
            out += l;
        return out;
    }

    friend bool operator==(const MetricGraph& a, const MetricGraph& b) {
        return a.g_ == b.g_ && a.lengths_ == b.lengths_;
    }

private:
    Graph g_;
    std::vector<Rational> lengths_;
};

/// A vertex, or a point strictly inside an edge at `offset` from edge.u.
/// Ordering: vertices by index, then edge points by (edge, offset).
struct GraphPoint {
    static constexpr EdgeIndex no_edge = std::numeric_limits<EdgeIndex>::max();

    Vertex vertex = 0;
    EdgeIndex edge = no_edge;
    Rational offset = 0;

    static GraphPoint at_vertex(Vertex v) { return GraphPoint{v, no_edge, 0}; }

    bool is_vertex() const noexcept { return edge == no_edge; }

    friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
        if (a.is_vertex() != b.is_vertex())
            return false;
        return a.is_vertex() ? a.vertex == b.vertex : a.edge == b.edge && a.offset == b.offset;
    }
    friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
        if (a.is_vertex() != b.is_vertex())
            return a.is_vertex();
        if (a.is_vertex())
            return a.vertex < b.vertex;
        if (a.edge != b.edge)
            return a.edge < b.edge;
        return a.offset < b.offset;
    }
};

inline std::string to_string(const GraphPoint& p) {
    if (p.is_vertex())
        return "v:" + std::to_string(p.vertex);
    return "e:" + std::to_string(p.edge) + "@" + p.offset.get_str();
}

/// Canonical point at `offset` along edge e; the endpoints become vertices.
inline GraphPoint point_on_edge(const MetricGraph& g, EdgeIndex e, Rational offset) {
    offset.canonicalize();
    if (e >= g.m())
        throw std::out_of_range("edge " + std::to_string(e) + " out of range");
    if (offset < 0 || offset > g.length(e))
        throw std::invalid_argument("offset outside edge " + std::to_string(e));
    if (offset == 0)
        return GraphPoint::at_vertex(g.graph().edge(e).u);
    if (offset == g.length(e))
        return GraphPoint::at_vertex(g.graph().edge(e).v);
    return GraphPoint{0, e, offset};
}

inline void check_point(const MetricGraph& g, const GraphPoint& p) {
    if (p.is_vertex()) {
        g.graph().check_vertex(p.vertex);
        return;
    }
    if (p.edge >= g.m())
        throw std::out_of_range("edge " + std::to_string(p.edge) + " out of range");
    if (p.offset <= 0 || p.offset >= g.length(p.edge))
        throw std::invalid_argument("edge point offset must lie strictly inside the edge");
}

/// Finitely supported integer weights on points; zero weights are never stored.
class MetricDivisor {
public:
    using Map = std::map<GraphPoint, std::int64_t>;

    MetricDivisor() = default;

    void add(const GraphPoint& p, std::int64_t k) {
        if (k == 0)
            return;
        auto [it, inserted] = w_.try_emplace(p, k);
        if (!inserted) {
            it->second += k;
            if (it->second == 0)
                w_.erase(it);
        }
    }

    std::int64_t operator[](const GraphPoint& p) const {
        const auto it = w_.find(p);
        return it == w_.end() ? 0 : it->second;
    }

    std::int64_t degree() const {
        std::int64_t out = 0;
        for (const auto& [p, k] : w_)
            out += k;
        return out;
    }

    const Map& weights() const noexcept { return w_; }
    auto begin() const { return w_.begin(); }
    auto end() const { return w_.end(); }
    std::size_t support_size() const noexcept { return w_.size(); }
    bool empty() const noexcept { return w_.empty(); }

    MetricDivisor& operator+=(const MetricDivisor& o) {
        for (const auto& [p, k] : o.w_)
            add(p, k);
        return *this;
    }
    MetricDivisor& operator-=(const MetricDivisor& o) {
        for (const auto& [p, k] : o.w_)
            add(p, -k);
        return *this;
    }
    friend MetricDivisor operator+(MetricDivisor a, const MetricDivisor& b) { return a += b; }
    friend MetricDivisor operator-(MetricDivisor a, const MetricDivisor& b) { return a -= b; }
    friend bool operator==(const MetricDivisor&, const MetricDivisor&) = default;

private:
    Map w_;
};

inline bool is_effective_outside(const MetricDivisor& d, const GraphPoint& q) {
    for (const auto& [p, k] : d)
        if (k < 0 && !(p == q))
            return false;
    return true;
}

inline MetricDivisor metric_divisor(const Divisor& d) {
    MetricDivisor out;
    for (Vertex v = 0; v < d.size(); ++v)
        out.add(GraphPoint::at_vertex(v), d[v]);
    return out;
}

/// The vertex divisor carrying the same weights, if the support is on vertices.
inline std::optional<Divisor> vertex_divisor(const MetricDivisor& d, std::size_t n) {
    Divisor out(n);
    for (const auto& [p, k] : d) {
        if (!p.is_vertex() || p.vertex >= n)
            return std::nullopt;
        out[p.vertex] = k;
    }
    return out;
}

struct Knot {
    Rational offset;
    Rational value;
    friend bool operator==(const Knot&, const Knot&) = default;
};

/// Continuous piecewise-linear function with integer slopes. Each edge is
/// described by its interior breakpoints (offset from edge.u, value); the
/// values at the ends come from the vertex values. Breakpoints where the
/// slope does not change are dropped, so equal functions compare equal.
class TropicalFunction {
public:
    explicit TropicalFunction(const MetricGraph& g)
        : g_(g), vertex_values_(g.n(), Rational(0)), breaks_(g.m()) {}

    TropicalFunction(const MetricGraph& g, std::vector<Rational> vertex_values, std::vector<std::vector<Knot>> breaks)
        : g_(g), vertex_values_(std::move(vertex_values)), breaks_(std::move(breaks)) {
        if (vertex_values_.size() != g_.n() || breaks_.size() != g_.m())
            throw std::invalid_argument("tropical function has wrong shape");
        for (EdgeIndex e = 0; e < g_.m(); ++e) {
            auto& b = breaks_[e];
            std::sort(b.begin(), b.end(), [](const Knot& x, const Knot& y) { return x.offset < y.offset; });
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (b[i].offset <= 0 || b[i].offset >= g_.length(e))
                    throw std::invalid_argument("breakpoint outside edge interior");
                if (i > 0 && b[i].offset == b[i - 1].offset)
                    throw std::invalid_argument("repeated breakpoint");
            }
        }
        simplify_and_check();
    }

    static TropicalFunction constant(const MetricGraph& g, const Rational& c) {
        return TropicalFunction(g, std::vector<Rational>(g.n(), c), std::vector<std::vector<Knot>>(g.m()));
    }

    const MetricGraph& graph() const noexcept { return g_; }
    const Rational& vertex_value(Vertex v) const { return vertex_values_.at(v); }
    const std::vector<Rational>& vertex_values() const noexcept { return vertex_values_; }
    const std::vector<Knot>& breakpoints(EdgeIndex e) const { return breaks_.at(e); }

    /// Breakpoints of edge e with both ends included.
    std::vector<Knot> knots(EdgeIndex e) const {
        std::vector<Knot> out;
        out.reserve(breaks_[e].size() + 2);
        out.push_back({Rational(0), vertex_values_[g_.graph().edge(e).u]});
        out.insert(out.end(), breaks_[e].begin(), breaks_[e].end());
        out.push_back({g_.length(e), vertex_values_[g_.graph().edge(e).v]});
        return out;
    }

    Rational value_on_edge(EdgeIndex e, const Rational& offset) const {
        const auto ks = knots(e);
        for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
            if (offset <= ks[i + 1].offset) {
                const Rational slope = (ks[i + 1].value - ks[i].value) / (ks[i + 1].offset - ks[i].offset);
                return ks[i].value + slope * (offset - ks[i].offset);
            }
        }
        return ks.back().value;
    }

    Rational value_at(const GraphPoint& p) const {
        check_point(g_, p);
        return p.is_vertex() ? vertex_values_[p.vertex] : value_on_edge(p.edge, p.offset);
    }

    Rational min_value() const {
        Rational best = vertex_values_[0];
        for (const auto& x : vertex_values_)
            best = std::min(best, x);
        for (const auto& b : breaks_)
            for (const auto& k : b)
                best = std::min(best, k.value);
        return best;
    }

    TropicalFunction& operator+=(const TropicalFunction& o) { return combine(o, 1); }
    TropicalFunction& operator-=(const TropicalFunction& o) { return combine(o, -1); }
    friend TropicalFunction operator+(TropicalFunction a, const TropicalFunction& b) { return a += b; }
    friend TropicalFunction operator-(TropicalFunction a, const TropicalFunction& b) { return a -= b; }
    friend TropicalFunction operator-(const TropicalFunction& a) { return TropicalFunction(a.g_) - a; }

    friend bool operator==(const TropicalFunction& a, const TropicalFunction& b) {
        return a.g_ == b.g_ && a.vertex_values_ == b.vertex_values_ && a.breaks_ == b.breaks_;
    }

private:
    TropicalFunction& combine(const TropicalFunction& o, int sign) {
        if (!(g_ == o.g_))
            throw std::invalid_argument("tropical functions live on different metric graphs");
        std::vector<std::vector<Knot>> merged(g_.m());
        for (EdgeIndex e = 0; e < g_.m(); ++e) {
            std::vector<Rational> offs;
            for (const auto& k : breaks_[e])
                offs.push_back(k.offset);
            for (const auto& k : o.breaks_[e])
                offs.push_back(k.offset);
            std::sort(offs.begin(), offs.end());
            offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
            for (const auto& t : offs) {
                const Rational b = o.value_on_edge(e, t);
                merged[e].push_back({t, value_on_edge(e, t) + (sign > 0 ? b : Rational(-b))});
            }
        }
        for (Vertex v = 0; v < g_.n(); ++v) {
            if (sign > 0)
                vertex_values_[v] += o.vertex_values_[v];
            else
                vertex_values_[v] -= o.vertex_values_[v];
        }
        breaks_ = std::move(merged);
        simplify_and_check();
        return *this;
    }

    void simplify_and_check() {
        for (EdgeIndex e = 0; e < g_.m(); ++e) {
            const auto ks = knots(e);
            std::vector<Rational> slopes;
            for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
                const Rational s = (ks[i + 1].value - ks[i].value) / (ks[i + 1].offset - ks[i].offset);
                if (!is_integral(s))
                    throw std::invalid_argument("tropical function has a non-integer slope on edge " +
                                                std::to_string(e));
                slopes.push_back(s);
            }
            std::vector<Knot> kept;
            for (std::size_t i = 1; i + 1 < ks.size(); ++i)
                if (slopes[i - 1] != slopes[i])
                    kept.push_back(ks[i]);
            breaks_[e] = std::move(kept);
        }
    }

    MetricGraph g_;
    std::vector<Rational> vertex_values_;
    std::vector<std::vector<Knot>> breaks_;
};

/// Delta(f) = -(sum of outgoing slopes) at every vertex and breakpoint.
inline MetricDivisor metric_laplacian(const MetricGraph& g, const TropicalFunction& f) {
    if (!(f.graph() == g))
        throw std::invalid_argument("function lives on a different metric graph");
    std::map<GraphPoint, Rational> acc;
    for (EdgeIndex e = 0; e < g.m(); ++e) {
        const auto ks = f.knots(e);
        std::vector<Rational> slopes;
        for (std::size_t i = 0; i + 1 < ks.size(); ++i)
            slopes.push_back((ks[i + 1].value - ks[i].value) / (ks[i + 1].offset - ks[i].offset));
        acc[GraphPoint::at_vertex(g.graph().edge(e).u)] -= slopes.front();
        acc[GraphPoint::at_vertex(g.graph().edge(e).v)] += slopes.back();
        for (std::size_t i = 1; i + 1 < ks.size(); ++i)
            acc[GraphPoint{0, e, ks[i].offset}] += slopes[i - 1] - slopes[i];
    }
    MetricDivisor out;
    for (const auto& [p, w] : acc)
        out.add(p, to_int64(w.get_num()));
    return out;
}

/// Γ cut at a finite point set. Nodes are the vertices (indices 0..n-1, so a
/// vertex keeps its index) followed by the extra interior points in canonical
/// order; segments run along each edge in increasing offset.
struct Subdivision {
    struct Segment {
        std::size_t a = 0;  // node at offset `from`
        std::size_t b = 0;  // node at offset `to`
        EdgeIndex edge = 0;
        Rational from, to;
        Rational length() const { return to - from; }
        std::size_t other(std::size_t node) const { return node == a ? b : a; }
        /// Offset along the edge reached after walking `dist` in from `node`.
        Rational offset_from(std::size_t node, const Rational& dist) const {
            return node == a ? Rational(from + dist) : Rational(to - dist);
        }
    };

    std::vector<GraphPoint> nodes;
    std::map<GraphPoint, std::size_t> index;
    std::vector<Segment> segments;
    std::vector<std::vector<std::size_t>> incident;

    std::size_t size() const noexcept { return nodes.size(); }

    std::size_t node(const GraphPoint& p) const {
        const auto it = index.find(p);
        if (it == index.end())
            throw std::invalid_argument("point " + to_string(p) + " is not a node of the subdivision");
        return it->second;
    }
};

inline Subdivision subdivide(const MetricGraph& g, std::vector<GraphPoint> points) {
    Subdivision s;
    for (const auto& p : points)
        check_point(g, p);
    for (Vertex v = 0; v < g.n(); ++v)
        points.push_back(GraphPoint::at_vertex(v));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    s.nodes = std::move(points);
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
        s.index.emplace(s.nodes[i], i);
    s.incident.resize(s.nodes.size());

    // Interior nodes are sorted by (edge, offset), so each edge's run is contiguous.
    std::size_t cursor = g.n();
    for (EdgeIndex e = 0; e < g.m(); ++e) {
        std::size_t prev = g.graph().edge(e).u;
        Rational prev_off = 0;
        while (cursor < s.nodes.size() && s.nodes[cursor].edge == e) {
            s.segments.push_back({prev, cursor, e, prev_off, s.nodes[cursor].offset});
            prev = cursor;
            prev_off = s.nodes[cursor].offset;
            ++cursor;
        }
        s.segments.push_back({prev, g.graph().edge(e).v, e, prev_off, g.length(e)});
    }
    for (std::size_t k = 0; k < s.segments.size(); ++k) {
        s.incident[s.segments[k].a].push_back(k);
        s.incident[s.segments[k].b].push_back(k);
    }
    return s;
}

/// The function that is linear on every segment with the given node values,
/// plus optional extra knots given as (segment, offset along the edge, value).
struct ExtraKnot {
    std::size_t segment;
    Rational offset;
    Rational value;
};

inline TropicalFunction function_on_subdivision(const MetricGraph& g, const Subdivision& s,
                                                const std::vector<Rational>& node_values,
                                                const std::vector<ExtraKnot>& extra = {}) {
    if (node_values.size() != s.size())
        throw std::invalid_argument("one value per subdivision node expected");
    std::vector<Rational> vv(node_values.begin(), node_values.begin() + static_cast<std::ptrdiff_t>(g.n()));
    std::vector<std::vector<Knot>> breaks(g.m());
    for (std::size_t i = g.n(); i < s.size(); ++i)
        breaks[s.nodes[i].edge].push_back({s.nodes[i].offset, node_values[i]});
    for (const auto& k : extra)
        breaks[s.segments.at(k.segment).edge].push_back({k.offset, k.value});
    return TropicalFunction(g, std::move(vv), std::move(breaks));
}

/// The chip-moving function of X: 0 on X, rising with slope 1 along every
/// segment leaving X for a distance eps, and eps everywhere else. Requires
/// 0 < eps <= length of every leaving segment.
inline TropicalFunction cut_function(const MetricGraph& g, const Subdivision& s, const std::vector<bool>& in_x,
                                     const Rational& eps) {
    if (eps <= 0)
        throw std::invalid_argument("cut_function: eps must be positive");
    std::vector<Rational> values(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        values[i] = in_x[i] ? Rational(0) : eps;
    std::vector<ExtraKnot> extra;
    for (std::size_t k = 0; k < s.segments.size(); ++k) {
        const auto& seg = s.segments[k];
        if (in_x[seg.a] == in_x[seg.b])
            continue;
        const std::size_t inside = in_x[seg.a] ? seg.a : seg.b;
        if (eps > seg.length())
            throw std::invalid_argument("cut_function: eps exceeds a leaving segment");
        if (eps < seg.length())
            extra.push_back({k, seg.offset_from(inside, eps), eps});
    }
    return function_on_subdivision(g, s, values, extra);
}

} // namespace chipfire

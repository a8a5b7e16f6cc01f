#pragma once

// Activity-preserving bijection between q-reduced divisors of a fixed degree
// and spanning trees, via controlled burns that always take the smallest
// eligible edge.

#include "chipfire/reduced.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace chipfire {

struct SpanningTree {
    std::vector<EdgeIndex> tree_edges;   // sorted
    std::vector<EdgeIndex> ext_active;   // sorted
    std::vector<EdgeIndex> ext_passive;  // sorted

    std::size_t external_activity() const { return ext_active.size(); }
    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

namespace detail {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return false;
        parent[a] = b;
        return true;
    }
    std::vector<std::size_t> parent;
};

/// Smallest edge not yet burnt with exactly one burnt endpoint.
inline std::optional<EdgeIndex> min_eligible(const Graph& g, const std::vector<bool>& burnt_vertex,
                                             const std::vector<bool>& burnt_edge) {
    for (EdgeIndex e = 0; e < g.m(); ++e) {
        if (burnt_edge[e])
            continue;
        const Edge& ed = g.edge(e);
        if (burnt_vertex[ed.u] != burnt_vertex[ed.v])
            return e;
    }
    return std::nullopt;
}

inline std::size_t burnt_incident(const Graph& g, const std::vector<bool>& burnt_edge, Vertex v) {
    std::size_t count = 0;
    for (EdgeIndex e : g.incident(v))
        if (burnt_edge[e])
            ++count;
    return count;
}

inline SpanningTree partition_from_burn(const Graph& g, std::vector<EdgeIndex> tree,
                                        const std::vector<bool>& burnt_edge) {
    std::sort(tree.begin(), tree.end());
    SpanningTree out;
    std::vector<bool> in_tree(g.m(), false);
    for (EdgeIndex e : tree)
        in_tree[e] = true;
    for (EdgeIndex e = 0; e < g.m(); ++e) {
        if (!burnt_edge[e])
            out.ext_active.push_back(e);
        else if (!in_tree[e])
            out.ext_passive.push_back(e);
    }
    out.tree_edges = std::move(tree);
    return out;
}

} // namespace detail

inline bool is_spanning_tree(const Graph& g, std::span<const EdgeIndex> edges) {
    if (edges.size() + 1 != g.n())
        return false;
    detail::UnionFind uf(g.n());
    std::vector<bool> used(g.m(), false);
    for (EdgeIndex e : edges) {
        if (e >= g.m() || used[e])
            return false;
        used[e] = true;
        if (!uf.unite(g.edge(e).u, g.edge(e).v))
            return false;
    }
    return true;
}

/// Reduced divisor to spanning tree. A vertex v burns through the edge f once
/// the edges already burnt at v number exactly D(v); f is then marked.
inline SpanningTree divisor_to_tree(const Graph& g, Vertex q, const Divisor& d) {
    if (!is_reduced(g, q, d))
        throw std::invalid_argument("divisor_to_tree: divisor is not q-reduced");
    std::vector<bool> burnt_vertex(g.n(), false), burnt_edge(g.m(), false);
    burnt_vertex[q] = true;
    std::size_t burnt_count = 1;
    std::vector<EdgeIndex> tree;
    while (burnt_count < g.n()) {
        const auto f = detail::min_eligible(g, burnt_vertex, burnt_edge);
        if (!f)
            throw std::logic_error("controlled burn stalled on a reduced divisor");
        const Edge& ed = g.edge(*f);
        const Vertex v = burnt_vertex[ed.u] ? ed.v : ed.u;
        if (d[v] == static_cast<std::int64_t>(detail::burnt_incident(g, burnt_edge, v))) {
            burnt_vertex[v] = true;
            ++burnt_count;
            tree.push_back(*f);
        }
        burnt_edge[*f] = true;
    }
    return detail::partition_from_burn(g, std::move(tree), burnt_edge);
}

struct TreeDivisor {
    Divisor divisor;
    SpanningTree tree;  // activity partition read off the burn
};

/// Spanning tree to reduced divisor of degree d: only tree edges burn through
/// vertices, and a vertex records how many of its edges had already burnt.
inline TreeDivisor tree_to_divisor_detailed(const Graph& g, Vertex q, std::span<const EdgeIndex> tree_edges,
                                            std::int64_t d) {
    g.check_vertex(q);
    if (!is_spanning_tree(g, tree_edges))
        throw std::invalid_argument("tree_to_divisor: edge set is not a spanning tree");
    std::vector<bool> in_tree(g.m(), false);
    for (EdgeIndex e : tree_edges)
        in_tree[e] = true;
    std::vector<bool> burnt_vertex(g.n(), false), burnt_edge(g.m(), false);
    burnt_vertex[q] = true;
    std::size_t burnt_count = 1;
    Divisor out(g.n());
    std::int64_t off_q = 0;
    while (burnt_count < g.n()) {
        const auto f = detail::min_eligible(g, burnt_vertex, burnt_edge);
        if (!f)
            throw std::logic_error("controlled burn stalled on a spanning tree");
        if (in_tree[*f]) {
            const Edge& ed = g.edge(*f);
            const Vertex v = burnt_vertex[ed.u] ? ed.v : ed.u;
            out[v] = static_cast<std::int64_t>(detail::burnt_incident(g, burnt_edge, v));
            off_q += out[v];
            burnt_vertex[v] = true;
            ++burnt_count;
        }
        burnt_edge[*f] = true;
    }
    out[q] = d - off_q;
    std::vector<EdgeIndex> tree(tree_edges.begin(), tree_edges.end());
    return {std::move(out), detail::partition_from_burn(g, std::move(tree), burnt_edge)};
}

inline Divisor tree_to_divisor(const Graph& g, Vertex q, std::span<const EdgeIndex> tree_edges, std::int64_t d) {
    return tree_to_divisor_detailed(g, q, tree_edges, d).divisor;
}

/// Degree defaults to the genus, which makes D(q) equal to the external activity.
inline Divisor tree_to_divisor(const Graph& g, Vertex q, std::span<const EdgeIndex> tree_edges) {
    return tree_to_divisor(g, q, tree_edges, g.genus());
}

/// External activity straight from the definition: a non-tree edge is active
/// iff it is the largest edge on the unique cycle it closes with the tree.
inline SpanningTree external_activity(const Graph& g, std::span<const EdgeIndex> tree_edges) {
    if (!is_spanning_tree(g, tree_edges))
        throw std::invalid_argument("external_activity: edge set is not a spanning tree");
    std::vector<bool> in_tree(g.m(), false);
    for (EdgeIndex e : tree_edges)
        in_tree[e] = true;
    // Root the tree at 0; parent edge and depth give tree paths.
    std::vector<EdgeIndex> parent_edge(g.n(), g.m());
    std::vector<std::size_t> depth(g.n(), 0);
    std::vector<bool> seen(g.n(), false);
    std::vector<Vertex> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (EdgeIndex e : g.incident(v)) {
            if (!in_tree[e])
                continue;
            const Vertex w = g.edge(e).other(v);
            if (seen[w])
                continue;
            seen[w] = true;
            parent_edge[w] = e;
            depth[w] = depth[v] + 1;
            stack.push_back(w);
        }
    }
    SpanningTree out;
    out.tree_edges.assign(tree_edges.begin(), tree_edges.end());
    std::sort(out.tree_edges.begin(), out.tree_edges.end());
    for (EdgeIndex e = 0; e < g.m(); ++e) {
        if (in_tree[e])
            continue;
        Vertex a = g.edge(e).u, b = g.edge(e).v;
        EdgeIndex largest = 0;
        bool any = false;
        auto climb = [&](Vertex& x) {
            const EdgeIndex pe = parent_edge[x];
            largest = any ? std::max(largest, pe) : pe;
            any = true;
            x = g.edge(pe).other(x);
        };
        while (a != b) {
            if (depth[a] >= depth[b])
                climb(a);
            else
                climb(b);
        }
        if (e > largest)
            out.ext_active.push_back(e);
        else
            out.ext_passive.push_back(e);
    }
    return out;
}

} // namespace chipfire

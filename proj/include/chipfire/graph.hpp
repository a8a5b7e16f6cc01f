#pragma once

// Multigraphs, divisors, integer vertex functions and the Laplacian operator.

#include "chipfire/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chipfire {

using Vertex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Vertex other(Vertex w) const { return w == u ? v : u; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Finite connected loopless multigraph. Parallel edges are stored by
/// repetition; the edge index is the total order used by every
/// order-sensitive algorithm (controlled burns, external activity).
class Graph {
public:
    Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), incident_(n) {
        if (n_ == 0)
            throw GraphError("graph must have at least one vertex");
        for (EdgeIndex e = 0; e < edges_.size(); ++e) {
            const Edge& ed = edges_[e];
            if (ed.u >= n_ || ed.v >= n_)
                throw GraphError("edge " + std::to_string(e) + " references a vertex out of range");
            if (ed.u == ed.v)
                throw GraphError("edge " + std::to_string(e) + " is a loop at vertex " + std::to_string(ed.u));
            incident_[ed.u].push_back(e);
            incident_[ed.v].push_back(e);
        }
        if (!connected())
            throw GraphError("graph is not connected");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    std::span<const EdgeIndex> incident(Vertex v) const { return incident_.at(v); }
    std::size_t degree(Vertex v) const { return incident_.at(v).size(); }

    /// Cycle rank m - n + 1.
    std::int64_t genus() const {
        return static_cast<std::int64_t>(m()) - static_cast<std::int64_t>(n()) + 1;
    }

    void check_vertex(Vertex v) const {
        if (v >= n_)
            throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    bool connected() const {
        std::vector<bool> seen(n_, false);
        std::vector<Vertex> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (EdgeIndex e : incident_[v]) {
                const Vertex w = edges_[e].other(v);
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n_;
    }

    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeIndex>> incident_;
};

/// Integer vector indexed by vertices; the tag keeps divisors and vertex
/// functions from being mixed up.
template <class Tag>
class VertexVector {
public:
    VertexVector() = default;
    explicit VertexVector(std::size_t n) : values_(n, 0) {}
    explicit VertexVector(std::vector<std::int64_t> values) : values_(std::move(values)) {}
    VertexVector(std::initializer_list<std::int64_t> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    std::int64_t& operator[](Vertex v) { return values_[v]; }
    std::int64_t operator[](Vertex v) const { return values_[v]; }
    std::span<const std::int64_t> values() const noexcept { return values_; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    std::int64_t sum() const { return std::accumulate(values_.begin(), values_.end(), std::int64_t{0}); }

    VertexVector& operator+=(const VertexVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] += o.values_[i];
        return *this;
    }
    VertexVector& operator-=(const VertexVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] -= o.values_[i];
        return *this;
    }
    VertexVector& operator*=(std::int64_t k) {
        for (auto& x : values_)
            x *= k;
        return *this;
    }
    friend VertexVector operator+(VertexVector a, const VertexVector& b) { return a += b; }
    friend VertexVector operator-(VertexVector a, const VertexVector& b) { return a -= b; }
    friend VertexVector operator-(VertexVector a) { return a *= -1; }
    friend VertexVector operator*(std::int64_t k, VertexVector a) { return a *= k; }
    friend bool operator==(const VertexVector&, const VertexVector&) = default;
    friend auto operator<=>(const VertexVector&, const VertexVector&) = default;

private:
    void check_size(const VertexVector& o) const {
        if (o.values_.size() != values_.size())
            throw std::invalid_argument("vertex vectors of different length");
    }

    std::vector<std::int64_t> values_;
};

struct DivisorTag {};
struct FunctionTag {};

using Divisor = VertexVector<DivisorTag>;
using VertexFunction = VertexVector<FunctionTag>;

inline std::int64_t degree(const Divisor& d) { return d.sum(); }

/// k * (v) on n vertices.
inline Divisor point_divisor(std::size_t n, Vertex v, std::int64_t k = 1) {
    Divisor d(n);
    d[v] = k;
    return d;
}

inline bool is_effective(const Divisor& d) {
    return std::all_of(d.begin(), d.end(), [](std::int64_t x) { return x >= 0; });
}

inline bool is_effective_outside(const Divisor& d, Vertex q) {
    for (Vertex v = 0; v < d.size(); ++v)
        if (v != q && d[v] < 0)
            return false;
    return true;
}

inline VertexFunction characteristic(std::size_t n, std::span<const Vertex> set) {
    VertexFunction f(n);
    for (Vertex v : set)
        f[v] = 1;
    return f;
}

/// Witness of D1 = D2 + Delta(f), normalized so f(base) = 0.
struct FiringScript {
    VertexFunction f;
    Vertex base = 0;
};

inline VertexFunction normalized(VertexFunction f, Vertex base) {
    const std::int64_t shift = f[base];
    for (Vertex v = 0; v < f.size(); ++v)
        f[v] -= shift;
    return f;
}

inline Matrix<std::int64_t> laplacian(const Graph& g) {
    Matrix<std::int64_t> q(g.n(), g.n());
    for (const Edge& e : g.edges()) {
        q(e.u, e.u) += 1;
        q(e.v, e.v) += 1;
        q(e.u, e.v) -= 1;
        q(e.v, e.u) -= 1;
    }
    return q;
}

/// Delta_v(f) = sum over edges {v,w} of f(v) - f(w).
inline Divisor apply_laplacian(const Graph& g, const VertexFunction& f) {
    if (f.size() != g.n())
        throw std::invalid_argument("vertex function has wrong length");
    Divisor out(g.n());
    for (const Edge& e : g.edges()) {
        const std::int64_t d = f[e.u] - f[e.v];
        out[e.u] += d;
        out[e.v] -= d;
    }
    return out;
}

/// Number of edges between v and the complement of the set marked in `in_set`.
inline std::size_t outdeg(const Graph& g, const std::vector<bool>& in_set, Vertex v) {
    if (v >= g.n() || !in_set.at(v))
        throw std::invalid_argument("outdeg: vertex " + std::to_string(v) + " is not in the set");
    std::size_t count = 0;
    for (EdgeIndex e : g.incident(v))
        if (!in_set[g.edge(e).other(v)])
            ++count;
    return count;
}

inline std::vector<bool> vertex_mask(std::size_t n, std::span<const Vertex> set) {
    std::vector<bool> mask(n, false);
    for (Vertex v : set) {
        if (v >= n)
            throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
        mask[v] = true;
    }
    return mask;
}

inline std::size_t outdeg(const Graph& g, std::span<const Vertex> set, Vertex v) {
    return outdeg(g, vertex_mask(g.n(), set), v);
}

/// D - Delta(chi_A): every vertex of A fires once.
inline Divisor fire_set(const Graph& g, const Divisor& d, std::span<const Vertex> set) {
    return d - apply_laplacian(g, characteristic(g.n(), set));
}

} // namespace chipfire

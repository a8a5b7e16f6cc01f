#pragma once

// The Jacobian (sandpile) group of a graph: its Smith presentation, the
// bijective matrix-tree theorem, uniform spanning tree sampling, the group law
// on reduced divisors, and dollar-game / rank queries.

#include "chipfire/equivalence.hpp"
#include "chipfire/random.hpp"
#include "chipfire/reduced.hpp"
#include "chipfire/smith.hpp"
#include "chipfire/tree_bijection.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace chipfire {

/// Jac(G) = Z/n_1 + ... + Z/n_s with each factor generated by a q-reduced
/// degree-zero divisor.
struct JacobianPresentation {
    Vertex q = 0;
    std::vector<BigInt> invariant_factors;
    std::vector<Divisor> generators;

    BigInt order() const {
        BigInt out = 1;
        for (const auto& f : invariant_factors)
            out *= f;
        return out;
    }
};

/// Smith form of the reduced Laplacian Q_q. Coordinates are taken in the
/// basis (v) - (q), v != q, of Div^0, so the columns of U^-1 are generators.
inline JacobianPresentation jacobian(const Graph& g, const PotentialTable& table) {
    const Vertex q = table.base();
    JacobianPresentation out;
    out.q = q;
    if (g.n() == 1)
        return out;
    const SmithDecomposition snf = smith_normal_form(detail::reduced_laplacian(g, q));
    auto pos = [q](std::size_t i) { return i < q ? i : i + 1; };
    for (std::size_t t = 0; t + 1 < g.n(); ++t) {
        const BigInt& factor = snf.s(t, t);
        if (factor <= 1)
            continue;
        std::vector<BigInt> raw(g.n(), BigInt(0));
        for (std::size_t i = 0; i + 1 < g.n(); ++i) {
            raw[pos(i)] = snf.u_inverse(i, t);
            raw[q] -= snf.u_inverse(i, t);
        }
        const auto small = small_representative(g, table, raw);
        out.invariant_factors.push_back(factor);
        out.generators.push_back(reduce(g, table, small.divisor).result);
    }
    return out;
}

inline JacobianPresentation jacobian(const Graph& g, Vertex q) { return jacobian(g, j_function(g, q)); }

/// |det Q_q| by fraction-free elimination.
inline BigInt count_spanning_trees(const Graph& g) {
    if (g.n() == 1)
        return 1;
    return abs(determinant(detail::reduced_laplacian(g, 0)));
}

/// Uniform spanning trees: a uniform element of Jac(G), its q-reduced
/// representative, then the controlled burn. The presentation is built once.
class SpanningTreeSampler {
public:
    SpanningTreeSampler(const Graph& g, Vertex q) : g_(g), table_(g, q), presentation_(jacobian(g, table_)) {}

    const JacobianPresentation& presentation() const noexcept { return presentation_; }
    const PotentialTable& table() const noexcept { return table_; }

    /// The q-reduced divisor of sum_i a_i g_i.
    Divisor element(std::span<const BigInt> coeffs) const {
        if (coeffs.size() != presentation_.generators.size())
            throw std::invalid_argument("wrong number of group coordinates");
        std::vector<BigInt> acc(g_.n(), BigInt(0));
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            for (Vertex v = 0; v < g_.n(); ++v)
                acc[v] += coeffs[i] * to_big(presentation_.generators[i][v]);
        const auto small = small_representative(g_, table_, acc);
        return reduce(g_, table_, small.divisor).result;
    }

    SpanningTree tree_for(std::span<const BigInt> coeffs) const {
        return divisor_to_tree(g_, table_.base(), element(coeffs));
    }

    std::vector<BigInt> draw(std::uint64_t seed, std::uint64_t index) const {
        auto rng = substream(seed, index);
        std::vector<BigInt> coeffs;
        for (const auto& n : presentation_.invariant_factors)
            coeffs.push_back(uniform_below(rng, n));
        return coeffs;
    }

    SpanningTree sample(std::uint64_t seed, std::uint64_t index) const { return tree_for(draw(seed, index)); }

    std::vector<SpanningTree> sample_many(std::uint64_t seed, std::size_t count) const {
        std::vector<SpanningTree> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            out.push_back(sample(seed, k));
        return out;
    }

private:
    Graph g_;
    PotentialTable table_;
    JacobianPresentation presentation_;
};

inline std::vector<SpanningTree> sample_spanning_tree(const Graph& g, Vertex q, std::uint64_t seed,
                                                      std::size_t count) {
    return SpanningTreeSampler(g, q).sample_many(seed, count);
}

/// The q-reduced representative of D1 + D2 for reduced degree-zero inputs.
inline Divisor group_add(const Graph& g, const PotentialTable& table, const Divisor& d1, const Divisor& d2) {
    const Vertex q = table.base();
    for (const Divisor* d : {&d1, &d2}) {
        if (degree(*d) != 0)
            throw std::invalid_argument("group_add: operands must have degree zero");
        if (!is_reduced(g, q, *d))
            throw std::invalid_argument("group_add: operands must be q-reduced");
    }
    return reduce(g, table, d1 + d2).result;
}

inline Divisor group_add(const Graph& g, Vertex q, const Divisor& d1, const Divisor& d2) {
    return group_add(g, j_function(g, q), d1, d2);
}

/// Dollar game: D is winnable iff its q-reduced representative is effective.
/// On success the script moves D to that effective divisor.
inline std::optional<FiringScript> winnable(const Graph& g, const PotentialTable& table, const Divisor& d) {
    if (degree(d) < 0)
        return std::nullopt;
    if (is_effective(d))
        return FiringScript{VertexFunction(g.n()), table.base()};
    ReductionReport rep = reduce(g, table, d);
    if (!is_effective(rep.result))
        return std::nullopt;
    return std::move(rep.script);
}

inline std::optional<FiringScript> winnable(const Graph& g, const Divisor& d, Vertex q) {
    return winnable(g, j_function(g, q), d);
}

/// r(D) >= c: D - E is winnable for every effective E of degree c. Effective
/// divisors are visited in lexicographic order; the first failure stops the scan.
inline bool rank_at_least(const Graph& g, const PotentialTable& table, const Divisor& d, std::int64_t c) {
    if (c < 0)
        throw std::invalid_argument("rank_at_least: c must be nonnegative");
    if (degree(d) < c)
        return false;
    const std::size_t n = g.n();
    Divisor e(n);
    // Walk all compositions of c into n parts, lexicographically increasing.
    e[n - 1] = c;
    for (;;) {
        if (!winnable(g, table, d - e))
            return false;
        // Successor: the rightmost k < n-1 with mass after it gains one chip
        // and everything after k collapses onto the last slot.
        std::size_t k = n;
        std::int64_t tail = 0;
        for (std::size_t j = n - 1; j-- > 0;) {
            tail += e[j + 1];
            if (tail > 0) {
                k = j;
                break;
            }
        }
        if (k == n)
            return true;
        for (std::size_t j = k + 1; j < n; ++j)
            e[j] = 0;
        e[k] += 1;
        e[n - 1] = tail - 1;
    }
}

inline bool rank_at_least(const Graph& g, const Divisor& d, std::int64_t c) {
    return rank_at_least(g, j_function(g, 0), d, c);
}

/// K+ = sum_v (deg(v) - 1)(v).
inline Divisor k_plus(const Graph& g) {
    Divisor out(g.n());
    for (Vertex v = 0; v < g.n(); ++v)
        out[v] = static_cast<std::int64_t>(g.degree(v)) - 1;
    return out;
}

/// K = sum_v (deg(v) - 2)(v).
inline Divisor canonical_divisor(const Graph& g) {
    Divisor out(g.n());
    for (Vertex v = 0; v < g.n(); ++v)
        out[v] = static_cast<std::int64_t>(g.degree(v)) - 2;
    return out;
}

/// D is q-reduced iff K+ - D is q-critical.
inline Divisor to_critical(const Graph& g, Vertex q, const Divisor& d) {
    if (!is_reduced(g, q, d))
        throw std::invalid_argument("to_critical: divisor is not q-reduced");
    return k_plus(g) - d;
}

} // namespace chipfire

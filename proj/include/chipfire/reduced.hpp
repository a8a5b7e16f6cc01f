#pragma once

// q-reduced divisors: Dhar's burning test, the three-step reduction and the
// potential-theoretic bounds on the number of chip-firing moves it makes.

#include "chipfire/potential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace chipfire {

struct DharOutcome {
    bool reduced = false;
    /// Burn order starting at q; complete exactly when `reduced`.
    std::vector<Vertex> burn_order;
    /// Vertices the fire never reached; each holds at least as many chips as
    /// it has edges to burnt vertices, so firing the whole set keeps D
    /// effective off q.
    std::vector<Vertex> unburnt;
    /// Vertices other than q in debt. When non-empty the burn is not run and
    /// `unburnt` stays empty.
    std::vector<Vertex> negative;
};

/// Dhar's burning algorithm. Among burnable vertices the lowest index burns first.
inline DharOutcome dhar(const Graph& g, Vertex q, const Divisor& d) {
    g.check_vertex(q);
    if (d.size() != g.n())
        throw std::invalid_argument("divisor has wrong length");
    DharOutcome out;
    for (Vertex v = 0; v < g.n(); ++v)
        if (v != q && d[v] < 0)
            out.negative.push_back(v);
    if (!out.negative.empty())
        return out;

    std::vector<bool> burnt(g.n(), false);
    std::vector<std::int64_t> burnt_edges(g.n(), 0);
    auto burn = [&](Vertex v) {
        burnt[v] = true;
        out.burn_order.push_back(v);
        for (EdgeIndex e : g.incident(v))
            ++burnt_edges[g.edge(e).other(v)];
    };
    burn(q);
    for (;;) {
        Vertex next = g.n();
        for (Vertex v = 0; v < g.n(); ++v)
            if (!burnt[v] && d[v] < burnt_edges[v]) {
                next = v;
                break;
            }
        if (next == g.n())
            break;
        burn(next);
    }
    out.reduced = out.burn_order.size() == g.n();
    for (Vertex v = 0; v < g.n(); ++v)
        if (!burnt[v])
            out.unburnt.push_back(v);
    return out;
}

inline bool is_reduced(const Graph& g, Vertex q, const Divisor& d) { return dhar(g, q, d).reduced; }

/// [D] - Q floor(L_(q)[D]) for a big-integer input, plus the script -floor(L_(q)[D]).
/// Every coordinate off q of the result satisfies |D'(v)| < deg(v).
struct SmallRepresentative {
    Divisor divisor;
    VertexFunction script;
};

inline SmallRepresentative small_representative(const Graph& g, const PotentialTable& table,
                                                std::span<const BigInt> d) {
    const std::size_t n = g.n();
    if (d.size() != n)
        throw std::invalid_argument("divisor has wrong length");
    std::vector<BigInt> fl(n);
    for (Vertex p = 0; p < n; ++p) {
        BigInt acc = 0;
        for (Vertex v = 0; v < n; ++v)
            acc += table.numerator(p, v) * d[v];
        mpz_fdiv_q(fl[p].get_mpz_t(), acc.get_mpz_t(), table.denominator().get_mpz_t());
    }
    std::vector<BigInt> out(d.begin(), d.end());
    for (const Edge& e : g.edges()) {
        const BigInt diff = fl[e.u] - fl[e.v];
        out[e.u] -= diff;
        out[e.v] += diff;
    }
    SmallRepresentative res{Divisor(n), VertexFunction(n)};
    for (Vertex v = 0; v < n; ++v) {
        res.divisor[v] = to_int64(out[v]);
        res.script[v] = to_int64(BigInt(-fl[v]));
    }
    return res;
}

inline SmallRepresentative small_representative(const Graph& g, const PotentialTable& table, const Divisor& d) {
    std::vector<BigInt> big;
    big.reserve(d.size());
    for (std::int64_t x : d)
        big.push_back(to_big(x));
    return small_representative(g, table, big);
}

struct EffectiveResult {
    Divisor divisor;        // effective outside q, equivalent to the input
    FiringScript script;    // divisor = input + Delta(script.f)
    Divisor after_step1;
    std::size_t borrowings = 0;
};

/// Steps 1 and 2 of the reduction: shrink the coordinates with the
/// generalized inverse, then let each indebted vertex other than q borrow
/// until nothing off q is negative.
inline EffectiveResult make_effective(const Graph& g, const PotentialTable& table, const Divisor& d) {
    const Vertex q = table.base();
    auto [cur, script] = small_representative(g, table, d);
    EffectiveResult out{cur, {}, cur, 0};
    for (;;) {
        Vertex v = 0;
        while (v < g.n() && (v == q || cur[v] >= 0))
            ++v;
        if (v == g.n())
            break;
        cur[v] += static_cast<std::int64_t>(g.degree(v));
        for (EdgeIndex e : g.incident(v))
            --cur[g.edge(e).other(v)];
        ++script[v];
        ++out.borrowings;
    }
    out.divisor = std::move(cur);
    out.script = FiringScript{normalized(std::move(script), q), q};
    return out;
}

inline EffectiveResult make_effective(const Graph& g, Vertex q, const Divisor& d) {
    return make_effective(g, j_function(g, q), d);
}

struct ReductionReport {
    Divisor result;
    FiringScript script;  // result = input + Delta(script.f)
    Divisor after_step1;
    Divisor after_step2;
    std::size_t moves_step2 = 0;
    std::size_t moves_step3 = 0;
    std::size_t total_set_fire_vertices = 0;
    std::vector<std::vector<Vertex>> fired_sets;

    /// Single-vertex borrowings plus vertex firings.
    std::size_t total_moves() const { return moves_step2 + total_set_fire_vertices; }
};

/// Step 3 alone: starting from `d`, effective outside q, repeatedly run
/// Dhar's algorithm and fire the whole unburnt set.
inline ReductionReport fire_to_reduced(const Graph& g, const PotentialTable& table, const Divisor& d) {
    const Vertex q = table.base();
    if (!is_effective_outside(d, q))
        throw std::invalid_argument("fire_to_reduced: divisor must be effective outside q");
    ReductionReport rep;
    rep.after_step1 = d;
    rep.after_step2 = d;
    Divisor cur = d;
    VertexFunction script(g.n());
    // b_q drops by |A| per firing and stays nonnegative.
    const Rational budget = table.b(cur);
    for (;;) {
        DharOutcome burn = dhar(g, q, cur);
        if (burn.reduced)
            break;
        cur = fire_set(g, cur, burn.unburnt);
        for (Vertex v : burn.unburnt)
            --script[v];
        ++rep.moves_step3;
        rep.total_set_fire_vertices += burn.unburnt.size();
        rep.fired_sets.push_back(std::move(burn.unburnt));
        if (Rational(static_cast<unsigned long>(rep.total_set_fire_vertices)) > budget)
            throw std::logic_error("reduction exceeded its b_q firing budget");
    }
    rep.result = std::move(cur);
    rep.script = FiringScript{normalized(std::move(script), q), q};
    return rep;
}

/// The unique q-reduced divisor equivalent to `d`.
inline ReductionReport reduce(const Graph& g, const PotentialTable& table, const Divisor& d) {
    const Vertex q = table.base();
    EffectiveResult eff = make_effective(g, table, d);
    ReductionReport rep = fire_to_reduced(g, table, eff.divisor);
    rep.after_step1 = eff.after_step1;
    rep.moves_step2 = eff.borrowings;
    VertexFunction script = eff.script.f;
    for (Vertex v = 0; v < g.n(); ++v)
        script[v] += rep.script.f[v];
    rep.script = FiringScript{normalized(std::move(script), q), q};
    return rep;
}

inline ReductionReport reduce(const Graph& g, Vertex q, const Divisor& d) { return reduce(g, j_function(g, q), d); }

/// Random members of |D|_q reached by set-firings and set-borrowings that
/// keep every vertex off q out of debt.
class LinearSystemWalker {
public:
    LinearSystemWalker(const Graph& g, Vertex q, std::uint64_t seed) : g_(g), q_(q), rng_(seed) {}

    Divisor step(const Divisor& from) {
        const std::size_t n = g_.n();
        if (n < 2)
            return from;
        std::uniform_int_distribution<std::uint64_t> mask_dist(1, (std::uint64_t{1} << std::min<std::size_t>(n, 62)) - 2);
        for (int attempt = 0; attempt < 64; ++attempt) {
            const std::uint64_t mask = n <= 62 ? mask_dist(rng_) : rng_();
            std::vector<Vertex> set;
            for (Vertex v = 0; v < n; ++v)
                if ((mask >> (v % 64)) & 1)
                    set.push_back(v);
            if (set.empty() || set.size() == n)
                continue;
            const bool borrow = (rng_() & 1) != 0;
            Divisor delta = apply_laplacian(g_, characteristic(n, set));
            Divisor cand = borrow ? from + delta : from - delta;
            if (is_effective_outside(cand, q_))
                return cand;
        }
        return from;
    }

    Divisor walk(const Divisor& from, int steps) {
        Divisor cur = from;
        for (int i = 0; i < steps; ++i)
            cur = step(cur);
        return cur;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    const Graph& g_;
    Vertex q_;
    std::mt19937_64 rng_;
};

/// Samples `trials` members D' of |D|_q and checks that the reduced divisor D
/// has strictly smaller E_q and b_q than every sampled D' != D.
inline bool verify_minimizer(const Graph& g, const PotentialTable& table, const Divisor& d, std::size_t trials,
                             std::uint64_t seed = 0) {
    const Vertex q = table.base();
    if (!is_reduced(g, q, d))
        throw std::invalid_argument("verify_minimizer: divisor is not q-reduced");
    const Rational energy = table.q_energy(d);
    const Rational potential = table.b(d);
    LinearSystemWalker walker(g, q, seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const int steps = 1 + static_cast<int>(walker.rng()() % 6);
        const Divisor other = walker.walk(d, steps);
        if (other == d)
            continue;
        if (!(energy < table.q_energy(other)) || !(potential < table.b(other)))
            return false;
    }
    return true;
}

inline bool verify_minimizer(const Graph& g, Vertex q, const Divisor& d, std::size_t trials, std::uint64_t seed = 0) {
    return verify_minimizer(g, j_function(g, q), d, trials, seed);
}

/// Upper bounds on the chip-firing moves made by `reduce`. Everything is
/// exact except `spectral`, which depends on a floating-point eigenvalue.
struct MoveBounds {
    Rational exact_potential;     // 3 sum_v sum_p j_q(p,v) deg(v)
    Rational resistance;          // 3(n-1) sum_v r(v,q) deg(v)
    Rational max_resistance_sum;  // 3(n-1) R_max sum_{v != q} deg(v)
    Rational max_resistance;      // 3(n-1)^2 R_max Delta_max
    Rational foster;              // 9(n-1) sum_v 1/(deg(v)+1) sum_{v != q} deg(v)
    double spectral = 0.0;        // 6(n-1)/lambda_1 sum_{v != q} deg(v)
    double lambda1 = 0.0;
    Rational diameter;            // 3(n-1) diam(G) sum_{v != q} deg(v)
    Rational max_effective_resistance;
    std::size_t graph_diameter = 0;
};

inline std::size_t diameter(const Graph& g) {
    std::size_t best = 0;
    for (Vertex s = 0; s < g.n(); ++s) {
        std::vector<std::size_t> dist(g.n(), SIZE_MAX);
        std::deque<Vertex> queue{s};
        dist[s] = 0;
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            for (EdgeIndex e : g.incident(v)) {
                const Vertex w = g.edge(e).other(v);
                if (dist[w] == SIZE_MAX) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = std::max(best, *std::max_element(dist.begin(), dist.end()));
    }
    return best;
}

/// Smallest nonzero Laplacian eigenvalue (algebraic connectivity), in double precision.
inline double algebraic_connectivity(const Graph& g) {
    if (g.n() < 2)
        return 0.0;
    const auto lap = laplacian(g);
    Eigen::MatrixXd m(g.n(), g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(lap(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(1);
}

inline MoveBounds move_bounds(const Graph& g, const PotentialTable& table) {
    const Vertex q = table.base();
    const std::size_t n = g.n();
    const Rational n1(static_cast<unsigned long>(n - 1));
    MoveBounds b;

    std::size_t deg_sum_off_q = 0;
    std::size_t max_degree = 0;
    Rational exact = 0, res = 0, foster_sum = 0;
    for (Vertex v = 0; v < n; ++v) {
        const Rational dv(static_cast<unsigned long>(g.degree(v)));
        exact += table.g(v) * dv;
        res += table.resistance_to_base(v) * dv;
        foster_sum += Rational(1, static_cast<unsigned long>(g.degree(v) + 1));
        if (v != q)
            deg_sum_off_q += g.degree(v);
        max_degree = std::max(max_degree, g.degree(v));
    }
    Rational r_max = 0;
    for (Vertex p = 0; p < n; ++p)
        for (Vertex v = p + 1; v < n; ++v) {
            const Rational r = table.j(p, p) + table.j(v, v) - 2 * table.j(p, v);
            if (r > r_max)
                r_max = r;
        }
    const Rational deg_off_q(static_cast<unsigned long>(deg_sum_off_q));
    b.exact_potential = 3 * exact;
    b.resistance = 3 * n1 * res;
    b.max_resistance_sum = 3 * n1 * r_max * deg_off_q;
    b.max_resistance = 3 * n1 * n1 * r_max * Rational(static_cast<unsigned long>(max_degree));
    b.foster = 9 * n1 * foster_sum * deg_off_q;
    b.lambda1 = algebraic_connectivity(g);
    b.spectral = n < 2 ? 0.0 : 6.0 * static_cast<double>(n - 1) / b.lambda1 * static_cast<double>(deg_sum_off_q);
    b.graph_diameter = diameter(g);
    b.diameter = 3 * n1 * Rational(static_cast<unsigned long>(b.graph_diameter)) * deg_off_q;
    b.max_effective_resistance = r_max;
    return b;
}

inline MoveBounds move_bounds(const Graph& g, Vertex q) { return move_bounds(g, j_function(g, q)); }

} // namespace chipfire

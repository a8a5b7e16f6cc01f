#pragma once

// Exact potential theory on a graph viewed as a unit-resistor network:
// generalized inverses of the Laplacian, the j-function, effective
// resistance, the energy pairing and the functionals E_q and b_q.

#include "chipfire/graph.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace chipfire {

enum class InverseKind { reduced, moore_penrose, weighted };

/// An exact matrix L with Q L Q = Q, tagged with how it was built.
struct GeneralizedInverse {
    RationalMatrix matrix;
    InverseKind kind = InverseKind::reduced;
    std::optional<Vertex> base;     // reduced(q)
    std::vector<Rational> weights;  // weighted(mu)
    bool shifted = false;           // weighted: G_mu = L_mu - c_mu J instead of L_mu
};

namespace detail {

inline IntMatrix reduced_laplacian(const Graph& g, Vertex q) {
    g.check_vertex(q);
    const auto lap = laplacian(g);
    const std::size_t n = g.n();
    IntMatrix out(n - 1, n - 1);
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (i == q)
            continue;
        for (std::size_t j = 0, c = 0; j < n; ++j) {
            if (j == q)
                continue;
            out(r, c) = to_big(lap(i, j));
            ++c;
        }
        ++r;
    }
    return out;
}

/// Inverse of the reduced Laplacian padded with a zero row and column at q,
/// as an integer matrix over the common denominator det(Q_q).
inline ScaledInverse padded_reduced_inverse(const Graph& g, Vertex q) {
    auto inv = fraction_free_inverse(reduced_laplacian(g, q));
    if (!inv)
        throw std::logic_error("reduced Laplacian of a connected graph is singular");
    const std::size_t n = g.n();
    ScaledInverse out{IntMatrix(n, n), inv->denominator};
    auto pos = [q](std::size_t i) { return i < q ? i : i + 1; };
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            out.scaled(pos(i), pos(j)) = inv->scaled(i, j);
    return out;
}

inline RationalMatrix rational_laplacian(const Graph& g) {
    return laplacian(g).map<Rational>([](std::int64_t x) { return to_rational(x); });
}

} // namespace detail

/// L_(q): the inverse of Q with row and column q deleted, padded with zeros.
inline GeneralizedInverse reduced_inverse(const Graph& g, Vertex q) {
    return {detail::padded_reduced_inverse(g, q).to_rational(), InverseKind::reduced, q, {}, false};
}

/// Q+ = (Q + J/n)^-1 - J/n.
inline GeneralizedInverse moore_penrose(const Graph& g) {
    const std::size_t n = g.n();
    const Rational inv_n(1, static_cast<unsigned long>(n));
    RationalMatrix j_over_n(n, n, inv_n);
    auto inv = inverse(detail::rational_laplacian(g) + j_over_n);
    if (!inv)
        throw std::logic_error("Q + J/n is singular for a connected graph");
    return {*inv - j_over_n, InverseKind::moore_penrose, std::nullopt, {}, false};
}

/// L_mu = sum_i mu_i L_(i); with `shift`, returns G_mu = L_mu - c_mu J, which kills mu.
inline GeneralizedInverse weighted_inverse(const Graph& g, std::span<const Rational> mu, bool shift = false) {
    const std::size_t n = g.n();
    if (mu.size() != n)
        throw std::invalid_argument("weighted_inverse: weight vector has wrong length");
    Rational total = 0;
    for (const auto& w : mu)
        total += w;
    if (total != 1)
        throw std::invalid_argument("weighted_inverse: weights must sum to 1, got " + total.get_str());
    RationalMatrix acc(n, n);
    for (Vertex i = 0; i < n; ++i) {
        if (mu[i] == 0)
            continue;
        acc = acc + mu[i] * detail::padded_reduced_inverse(g, i).to_rational();
    }
    if (shift) {
        const std::vector<Rational> lm = acc * std::vector<Rational>(mu.begin(), mu.end());
        const Rational c = lm[0];
        acc = acc - RationalMatrix(n, n, c);
    }
    return {std::move(acc), InverseKind::weighted, std::nullopt, std::vector<Rational>(mu.begin(), mu.end()), shift};
}

/// j_q(p, v) for all p, v: entry (p, v) of L_(q). Computing this once per
/// (graph, base) and sharing it is the intended use; it is immutable.
class PotentialTable {
public:
    PotentialTable(const Graph& g, Vertex q) : q_(q), n_(g.n()) {
        ScaledInverse inv = detail::padded_reduced_inverse(g, q);
        numerators_ = std::move(inv.scaled);
        denominator_ = std::move(inv.denominator);
        j_ = RationalMatrix(n_, n_);
        g_numerators_.assign(n_, BigInt(0));
        for (Vertex p = 0; p < n_; ++p)
            for (Vertex v = 0; v < n_; ++v) {
                j_(p, v) = Rational(numerators_(p, v), denominator_);
                j_(p, v).canonicalize();
                g_numerators_[v] += numerators_(p, v);
            }
        for (Vertex v = 0; v < n_; ++v) {
            Rational gv(g_numerators_[v], denominator_);
            gv.canonicalize();
            g_.push_back(gv);
        }
    }

    Vertex base() const noexcept { return q_; }
    std::size_t n() const noexcept { return n_; }
    const RationalMatrix& matrix() const noexcept { return j_; }
    const Rational& j(Vertex p, Vertex v) const { return j_(p, v); }

    /// r(p, q) = j_q(p, p).
    const Rational& resistance_to_base(Vertex p) const { return j_(p, p); }

    /// g_q(v) = sum_p j_q(p, v); the unique solution of Delta(g) = sum (v) - n (q), g(q) = 0.
    const Rational& g(Vertex v) const { return g_[v]; }
    std::span<const Rational> g_values() const noexcept { return g_; }

    /// Common denominator of every j-value (det of the reduced Laplacian).
    const BigInt& denominator() const noexcept { return denominator_; }
    const BigInt& numerator(Vertex p, Vertex v) const { return numerators_(p, v); }

    /// E_q(D) = <D - deg(D)(q), D - deg(D)(q)>.
    Rational q_energy(const Divisor& d) const {
        check(d);
        BigInt acc = 0;
        for (Vertex u = 0; u < n_; ++u) {
            if (u == q_ || d[u] == 0)
                continue;
            BigInt row = 0;
            for (Vertex v = 0; v < n_; ++v)
                if (v != q_ && d[v] != 0)
                    row += numerators_(u, v) * to_big(d[v]);
            acc += to_big(d[u]) * row;
        }
        Rational out(acc, denominator_);
        out.canonicalize();
        return out;
    }

    /// b_q(D) = <1, D>_q = sum_v g_q(v) D(v).
    Rational b(const Divisor& d) const {
        check(d);
        BigInt acc = 0;
        for (Vertex v = 0; v < n_; ++v)
            if (d[v] != 0)
                acc += g_numerators_[v] * to_big(d[v]);
        Rational out(acc, denominator_);
        out.canonicalize();
        return out;
    }

    /// <h, D>_q for weights h(v) > 0 off q.
    Rational b(const Divisor& d, std::span<const Rational> h) const {
        check(d);
        if (h.size() != n_)
            throw std::invalid_argument("b_q: weight vector has wrong length");
        for (Vertex v = 0; v < n_; ++v)
            if (v != q_ && h[v] <= 0)
                throw std::invalid_argument("b_q: weights must be positive off the base vertex");
        Rational acc = 0;
        for (Vertex p = 0; p < n_; ++p) {
            if (p == q_)
                continue;
            for (Vertex v = 0; v < n_; ++v)
                if (v != q_ && d[v] != 0)
                    acc += h[p] * j_(p, v) * to_rational(d[v]);
        }
        return acc;
    }

private:
    void check(const Divisor& d) const {
        if (d.size() != n_)
            throw std::invalid_argument("divisor has wrong length");
    }

    Vertex q_;
    std::size_t n_;
    RationalMatrix j_;
    IntMatrix numerators_;
    BigInt denominator_;
    std::vector<BigInt> g_numerators_;
    std::vector<Rational> g_;
};

inline PotentialTable j_function(const Graph& g, Vertex q) { return PotentialTable(g, q); }

inline Rational effective_resistance(const Graph& g, Vertex p, Vertex q) {
    g.check_vertex(p);
    return j_function(g, q).resistance_to_base(p);
}

/// [D1]^T L [D2] for degree-zero divisors; independent of the generalized inverse.
inline Rational energy_pairing(const GeneralizedInverse& inv, const Divisor& d1, const Divisor& d2) {
    if (degree(d1) != 0 || degree(d2) != 0)
        throw std::invalid_argument("energy pairing is defined on degree-zero divisors only");
    const auto& l = inv.matrix;
    if (d1.size() != l.rows() || d2.size() != l.rows())
        throw std::invalid_argument("divisor has wrong length");
    Rational acc = 0;
    for (Vertex u = 0; u < l.rows(); ++u) {
        if (d1[u] == 0)
            continue;
        for (Vertex v = 0; v < l.cols(); ++v)
            if (d2[v] != 0)
                acc += to_rational(d1[u]) * l(u, v) * to_rational(d2[v]);
    }
    return acc;
}

inline Rational energy_pairing(const Graph& g, const Divisor& d1, const Divisor& d2) {
    return energy_pairing(reduced_inverse(g, 0), d1, d2);
}

inline Rational q_energy(const Graph& g, Vertex q, const Divisor& d) { return j_function(g, q).q_energy(d); }

inline Rational b_q(const Graph& g, Vertex q, const Divisor& d) { return j_function(g, q).b(d); }

inline Rational b_q(const Graph& g, Vertex q, const Divisor& d, std::span<const Rational> h) {
    return j_function(g, q).b(d, h);
}

} // namespace chipfire

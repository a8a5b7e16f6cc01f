#pragma once

#include "chipfire/potential.hpp"

#include <optional>

namespace chipfire {

/// Script f with D1 = D2 + Delta(f), f(q) = 0, if D1 and D2 are linearly
/// equivalent. Solved as f = L_(q)[D1 - D2], which must come out integral.
inline std::optional<FiringScript> is_linearly_equivalent(const PotentialTable& table, const Divisor& d1,
                                                          const Divisor& d2) {
    if (d1.size() != table.n() || d2.size() != table.n())
        throw std::invalid_argument("divisor has wrong length");
    if (degree(d1) != degree(d2))
        return std::nullopt;
    const Divisor diff = d1 - d2;
    const std::size_t n = table.n();
    VertexFunction f(n);
    for (Vertex p = 0; p < n; ++p) {
        BigInt acc = 0;
        for (Vertex v = 0; v < n; ++v)
            if (diff[v] != 0)
                acc += table.numerator(p, v) * to_big(diff[v]);
        if (!mpz_divisible_p(acc.get_mpz_t(), table.denominator().get_mpz_t()))
            return std::nullopt;
        BigInt value;
        mpz_divexact(value.get_mpz_t(), acc.get_mpz_t(), table.denominator().get_mpz_t());
        f[p] = to_int64(value);
    }
    return FiringScript{std::move(f), table.base()};
}

inline std::optional<FiringScript> is_linearly_equivalent(const Graph& g, const Divisor& d1, const Divisor& d2,
                                                          Vertex q) {
    return is_linearly_equivalent(j_function(g, q), d1, d2);
}

} // namespace chipfire

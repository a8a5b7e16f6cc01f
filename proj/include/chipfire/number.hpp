#pragma once

// Exact arithmetic vocabulary shared by every module.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chipfire {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt floor_of(const Rational& r) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline std::int64_t to_int64(const BigInt& x) {
    if (!mpz_fits_slong_p(x.get_mpz_t()))
        throw std::overflow_error("integer does not fit in 64 bits: " + x.get_str());
    static_assert(sizeof(long) == sizeof(std::int64_t));
    return x.get_si();
}

inline BigInt to_big(std::int64_t x) {
    static_assert(sizeof(long) == sizeof(std::int64_t));
    return BigInt(static_cast<long>(x));
}

inline Rational to_rational(std::int64_t x) { return Rational(to_big(x)); }

inline std::string to_string(const BigInt& x) { return x.get_str(); }
inline std::string to_string(const Rational& x) { return x.get_str(); }

/// Parses "p" or "p/q" (optional sign, decimal digits only).
inline Rational parse_rational(std::string_view text) {
    auto digits_only = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+'))
            s.remove_prefix(1);
        if (s.empty())
            return false;
        for (char c : s)
            if (c < '0' || c > '9')
                return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_only(num, true) || !digits_only(den, false))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    std::string n(num);
    if (!n.empty() && n[0] == '+')
        n.erase(0, 1);
    BigInt d(std::string{den});
    if (d == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational out(BigInt(n), d);
    out.canonicalize();
    return out;
}

} // namespace chipfire

#pragma once

// Potential theory on a metric graph: j_q(x, y), effective resistance, the
// q-energy and b_q, all solved exactly on a subdivision with conductance
// 1/length per segment.

#include "chipfire/matrix.hpp"
#include "chipfire/metric.hpp"

#include <stdexcept>
#include <vector>

namespace chipfire {

/// j_q on the nodes of one subdivision.
struct MetricPotentialTable {
    Subdivision model;
    std::size_t ground = 0;
    RationalMatrix j;  // j(x, y) indexed by node

    const Rational& at(const GraphPoint& x, const GraphPoint& y) const { return j(model.node(x), model.node(y)); }

    /// Integral over Γ of y -> j(x, y); linear on every segment.
    Rational integral(std::size_t x) const {
        Rational out = 0;
        for (const auto& s : model.segments)
            out += s.length() * (j(x, s.a) + j(x, s.b)) / 2;
        return out;
    }
};

class MetricPotentials {
public:
    MetricPotentials(const MetricGraph& g, const GraphPoint& q) : g_(g), q_(q) { check_point(g_, q_); }

    const GraphPoint& base() const noexcept { return q_; }
    const MetricGraph& graph() const noexcept { return g_; }

    /// Solves Delta_x j(x, y) = delta_y - delta_q on Γ cut at `points` and q.
    MetricPotentialTable solve(std::vector<GraphPoint> points) const {
        points.push_back(q_);
        MetricPotentialTable t;
        t.model = subdivide(g_, std::move(points));
        t.ground = t.model.node(q_);
        const std::size_t k = t.model.size();
        RationalMatrix lap(k, k);
        for (const auto& s : t.model.segments) {
            const Rational c = 1 / s.length();
            lap(s.a, s.a) += c;
            lap(s.b, s.b) += c;
            lap(s.a, s.b) -= c;
            lap(s.b, s.a) -= c;
        }
        t.j = RationalMatrix(k, k);
        if (k == 1)
            return t;
        auto pos = [&](std::size_t i) { return i < t.ground ? i : i + 1; };
        RationalMatrix reduced(k - 1, k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i)
            for (std::size_t c = 0; c + 1 < k; ++c)
                reduced(i, c) = lap(pos(i), pos(c));
        const auto inv = inverse(reduced);
        if (!inv)
            throw std::logic_error("metric Laplacian is singular on a connected graph");
        for (std::size_t i = 0; i + 1 < k; ++i)
            for (std::size_t c = 0; c + 1 < k; ++c)
                t.j(pos(i), pos(c)) = (*inv)(i, c);
        return t;
    }

    Rational j(const GraphPoint& x, const GraphPoint& y) const { return solve({x, y}).at(x, y); }

    Rational resistance(const GraphPoint& x, const GraphPoint& y) const {
        const auto t = solve({x, y});
        return t.at(x, x) + t.at(y, y) - 2 * t.at(x, y);
    }

    /// <D1, D2>_q = sum_x sum_y D1(x) D2(y) j_q(x, y).
    Rational pairing(const MetricDivisor& d1, const MetricDivisor& d2) const {
        const auto t = solve(support(d1, d2));
        Rational out = 0;
        for (const auto& [x, a] : d1)
            for (const auto& [y, b] : d2)
                out += to_rational(a) * to_rational(b) * t.at(x, y);
        return out;
    }

    /// E_q(D) = <D - deg(D)(q), D - deg(D)(q)>; the q-term vanishes since j_q(q, .) = 0.
    Rational energy(const MetricDivisor& d) const { return pairing(d, d); }

    /// b_q(D) = integral of j_q(x, y) dmu_{D - deg(D)(q)}(x) dy.
    Rational b(const MetricDivisor& d) const { return b(solve(support(d, {})), d); }

    static Rational b(const MetricPotentialTable& t, const MetricDivisor& d) {
        Rational out = 0;
        for (const auto& [x, a] : d)
            out += to_rational(a) * t.integral(t.model.node(x));
        return out;
    }

private:
    static std::vector<GraphPoint> support(const MetricDivisor& d1, const MetricDivisor& d2) {
        std::vector<GraphPoint> pts;
        for (const auto& [p, k] : d1)
            pts.push_back(p);
        for (const auto& [p, k] : d2)
            pts.push_back(p);
        return pts;
    }

    MetricGraph g_;
    GraphPoint q_;
};

inline MetricPotentials metric_potentials(const MetricGraph& g, const GraphPoint& q) { return MetricPotentials(g, q); }

} // namespace chipfire

#pragma once

// Reduced divisors on metric graphs: the burning test, the level
// construction that makes a divisor effective away from q, and the
// epsilon-move reduction loop with its b_q accounting.

#include "chipfire/metric.hpp"
#include "chipfire/metric_potential.hpp"

#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chipfire {

struct MetricSpan {
    EdgeIndex edge;
    Rational from, to;
    friend bool operator==(const MetricSpan&, const MetricSpan&) = default;
};

/// A connected closed set left unburnt: its points of the subdivision, the
/// closed segments between them, total length l(X) and the number of
/// directions leaving it.
struct UnburntComponent {
    std::vector<GraphPoint> points;
    std::vector<MetricSpan> segments;
    Rational length = 0;
    std::size_t outdegree = 0;
};

struct MetricDharOutcome {
    bool reduced = false;
    std::vector<GraphPoint> burn_order;
    /// Components ordered by their smallest point.
    std::vector<UnburntComponent> unburnt;
    /// Points other than q in debt; when present the burn is not run.
    std::vector<GraphPoint> negative;
};

namespace detail {

inline std::vector<GraphPoint> support_with(const MetricDivisor& d, const GraphPoint& q) {
    std::vector<GraphPoint> pts{q};
    for (const auto& [p, k] : d)
        pts.push_back(p);
    return pts;
}

/// Dhar on the subdivision: a node burns once more segments reach it from
/// burnt nodes than it holds chips. Returns the burnt mask and burn order.
inline std::pair<std::vector<bool>, std::vector<std::size_t>> burn(const Subdivision& s, std::size_t q,
                                                                   const std::vector<std::int64_t>& chips) {
    std::vector<bool> burnt(s.size(), false);
    std::vector<std::int64_t> heat(s.size(), 0);
    std::vector<std::size_t> order;
    auto ignite = [&](std::size_t x) {
        burnt[x] = true;
        order.push_back(x);
        for (std::size_t k : s.incident[x])
            ++heat[s.segments[k].other(x)];
    };
    ignite(q);
    for (;;) {
        std::size_t next = s.size();
        for (std::size_t x = 0; x < s.size(); ++x)
            if (!burnt[x] && chips[x] < heat[x]) {
                next = x;
                break;
            }
        if (next == s.size())
            break;
        ignite(next);
    }
    return {std::move(burnt), std::move(order)};
}

/// Components of the unburnt nodes joined by segments with both ends unburnt.
inline std::vector<std::vector<std::size_t>> unburnt_components(const Subdivision& s, const std::vector<bool>& burnt) {
    std::vector<std::size_t> label(s.size(), s.size());
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < s.size(); ++start) {
        if (burnt[start] || label[start] != s.size())
            continue;
        std::vector<std::size_t> comp{start};
        label[start] = out.size();
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t k : s.incident[comp[i]]) {
                const std::size_t y = s.segments[k].other(comp[i]);
                if (!burnt[y] && label[y] == s.size()) {
                    label[y] = out.size();
                    comp.push_back(y);
                }
            }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline UnburntComponent describe(const Subdivision& s, const std::vector<std::size_t>& nodes,
                                 std::vector<bool>& in_x) {
    in_x.assign(s.size(), false);
    for (std::size_t x : nodes)
        in_x[x] = true;
    UnburntComponent c;
    for (std::size_t x : nodes)
        c.points.push_back(s.nodes[x]);
    for (const auto& seg : s.segments) {
        if (in_x[seg.a] && in_x[seg.b]) {
            c.segments.push_back({seg.edge, seg.from, seg.to});
            c.length += seg.length();
        } else if (in_x[seg.a] || in_x[seg.b]) {
            ++c.outdegree;
        }
    }
    return c;
}

inline std::vector<std::int64_t> chips_on(const Subdivision& s, const MetricDivisor& d) {
    std::vector<std::int64_t> chips(s.size(), 0);
    for (const auto& [p, k] : d)
        chips[s.node(p)] = k;
    return chips;
}

} // namespace detail

/// Metric burning test on Γ cut at supp(D) and q.
inline MetricDharOutcome metric_dhar(const MetricGraph& g, const GraphPoint& q, const MetricDivisor& d) {
    check_point(g, q);
    MetricDharOutcome out;
    for (const auto& [p, k] : d) {
        check_point(g, p);
        if (k < 0 && !(p == q))
            out.negative.push_back(p);
    }
    if (!out.negative.empty())
        return out;
    const Subdivision s = subdivide(g, detail::support_with(d, q));
    const auto [burnt, order] = detail::burn(s, s.node(q), detail::chips_on(s, d));
    for (std::size_t x : order)
        out.burn_order.push_back(s.nodes[x]);
    out.reduced = order.size() == s.size();
    std::vector<bool> mask;
    for (const auto& comp : detail::unburnt_components(s, burnt))
        out.unburnt.push_back(detail::describe(s, comp, mask));
    return out;
}

inline bool metric_is_reduced(const MetricGraph& g, const GraphPoint& q, const MetricDivisor& d) {
    return metric_dhar(g, q, d).reduced;
}

struct MetricEffective {
    MetricDivisor divisor;  // = input + Delta(f), effective outside q
    TropicalFunction f;
    std::vector<Rational> level_coefficients;  // c_0, ..., c_{k-1}
};

/// Levels are hop distances from q in Γ cut at the vertices, supp(D) and q.
/// f is 0 at q and rises by c_i from level i to level i+1; the c_i are chosen
/// from the top level down as the least admissible multiple of the lcm of the
/// numerators of the lengths crossing that level, which keeps slopes integral.
inline MetricEffective metric_make_effective(const MetricGraph& g, const GraphPoint& q, const MetricDivisor& d) {
    check_point(g, q);
    for (const auto& [p, k] : d)
        check_point(g, p);
    const Subdivision s = subdivide(g, detail::support_with(d, q));
    const std::size_t qn = s.node(q);
    const auto chips = detail::chips_on(s, d);

    std::vector<std::size_t> level(s.size(), s.size());
    std::deque<std::size_t> queue{qn};
    level[qn] = 0;
    std::size_t top = 0;
    while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t k : s.incident[x]) {
            const std::size_t y = s.segments[k].other(x);
            if (level[y] == s.size()) {
                level[y] = level[x] + 1;
                top = std::max(top, level[y]);
                queue.push_back(y);
            }
        }
    }

    // c_i must be a multiple of every numerator of a length between levels i and i+1.
    std::vector<BigInt> unit(top, BigInt(1));
    for (const auto& seg : s.segments) {
        if (level[seg.a] == level[seg.b])
            continue;
        const Rational len = seg.length();
        BigInt& u = unit[std::min(level[seg.a], level[seg.b])];
        mpz_lcm(u.get_mpz_t(), u.get_mpz_t(), len.get_num_mpz_t());
    }

    std::vector<Rational> c(top, Rational(0));
    for (std::size_t i = top; i-- > 0;) {
        // Nodes at level i+1 gain c_i/len from each segment down to level i and
        // lose c_{i+1}/len along each segment up to level i+2.
        Rational need = 0;
        for (std::size_t y = 0; y < s.size(); ++y) {
            if (level[y] != i + 1)
                continue;
            Rational gain = 0, loss = 0;
            for (std::size_t k : s.incident[y]) {
                const std::size_t z = s.segments[k].other(y);
                if (level[z] == i)
                    gain += 1 / s.segments[k].length();
                else if (level[z] == i + 2)
                    loss += c[i + 1] / s.segments[k].length();
            }
            const Rational deficit = loss - to_rational(chips[y]);
            if (deficit > 0)
                need = std::max(need, Rational(deficit / gain));
        }
        BigInt steps;
        const Rational units = need / Rational(unit[i]);
        mpz_cdiv_q(steps.get_mpz_t(), units.get_num_mpz_t(), units.get_den_mpz_t());
        c[i] = Rational(steps * unit[i]);
    }

    std::vector<Rational> values(s.size(), Rational(0));
    std::vector<Rational> prefix(top + 1, Rational(0));
    for (std::size_t i = 0; i < top; ++i)
        prefix[i + 1] = prefix[i] + c[i];
    for (std::size_t x = 0; x < s.size(); ++x)
        values[x] = prefix[level[x]];

    MetricEffective out{MetricDivisor(), function_on_subdivision(g, s, values), std::move(c)};
    out.divisor = d + metric_laplacian(g, out.f);
    if (!is_effective_outside(out.divisor, q))
        throw std::logic_error("level construction left a point in debt");
    return out;
}

/// One epsilon-move: X is fired by eps toward the rest of Γ.
struct LuoStep {
    MetricDivisor before;
    MetricDivisor after;  // = before + Delta(move)
    UnburntComponent component;
    Rational epsilon;
    /// l(X) eps + outdeg(X) eps^2 / 2.
    Rational predicted_drop;
    std::optional<Rational> b_before;
    std::optional<Rational> b_after;
    TropicalFunction move;
};

struct MetricReduction {
    MetricDivisor input;
    MetricDivisor effective;
    MetricDivisor result;
    TropicalFunction effective_move;  // effective = input + Delta(effective_move)
    TropicalFunction total;           // result = input + Delta(total)
    std::vector<LuoStep> steps;
};

struct MetricReduceOptions {
    bool track_potential = true;
    std::size_t max_iterations = 100000;
};

/// Make effective outside q, then repeatedly burn from q and move the chips
/// of the first unburnt component X out by eps, the shortest segment leaving
/// X. Every leaving segment ends at a burnt point, so eps never overshoots a
/// chip or a vertex.
inline MetricReduction metric_reduce(const MetricGraph& g, const GraphPoint& q, const MetricDivisor& d,
                                     const MetricReduceOptions& opts = {}) {
    MetricEffective eff = metric_make_effective(g, q, d);
    MetricReduction out{d, eff.divisor, eff.divisor, eff.f, eff.f, {}};
    const MetricPotentials pot(g, q);
    std::optional<Rational> b_cur;
    MetricDivisor cur = eff.divisor;
    for (std::size_t iter = 0;; ++iter) {
        const Subdivision s = subdivide(g, detail::support_with(cur, q));
        const auto [burnt, order] = detail::burn(s, s.node(q), detail::chips_on(s, cur));
        if (order.size() == s.size())
            break;
        if (iter >= opts.max_iterations)
            throw std::runtime_error("metric reduction exceeded its iteration cap");
        const auto comps = detail::unburnt_components(s, burnt);
        std::vector<bool> in_x;
        UnburntComponent comp = detail::describe(s, comps.front(), in_x);

        std::optional<Rational> eps;
        for (const auto& seg : s.segments)
            if (in_x[seg.a] != in_x[seg.b] && (!eps || seg.length() < *eps))
                eps = seg.length();
        if (!eps)
            throw std::logic_error("unburnt component has no leaving segment");

        TropicalFunction move = cut_function(g, s, in_x, *eps);
        MetricDivisor next = cur + metric_laplacian(g, move);
        if (!is_effective_outside(next, q))
            throw std::logic_error("epsilon-move left a point in debt");
        const Rational drop = comp.length * *eps + Rational(comp.outdegree) * *eps * *eps / 2;

        std::optional<Rational> b_next;
        if (opts.track_potential) {
            if (!b_cur)
                b_cur = pot.b(cur);
            b_next = pot.b(next);
        }
        out.total += move;
        out.steps.push_back({cur, next, std::move(comp), *eps, drop, b_cur, b_next, std::move(move)});
        cur = std::move(next);
        b_cur = b_next;
    }
    out.result = std::move(cur);
    return out;
}

} // namespace chipfire

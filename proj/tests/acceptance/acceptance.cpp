// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "chipfire/chipfire.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace chipfire;
using chipfire::testing::NamedGraph;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (ok)
            return;
        pass = false;
        if (failures.size() < 5)
            failures.push_back(what);
    }
};

std::string show(const Divisor& d) { return "(" + format_divisor(d) + ")"; }

Divisor random_divisor(std::mt19937_64& rng, std::size_t n, int spread) {
    Divisor d(n);
    for (Vertex v = 0; v < n; ++v)
        d[v] = static_cast<std::int64_t>(rng() % (2 * spread + 1)) - spread;
    return d;
}

/// Up to `want` members of |D|_q other than D, reached by random set-firings
/// and set-borrowings that keep every vertex off q out of debt.
std::vector<Divisor> class_members(const Graph& g, Vertex q, const Divisor& d, std::size_t want,
                                   std::mt19937_64& rng) {
    std::vector<Divisor> out;
    if (g.n() < 2)
        return out;
    Divisor cur = d;
    for (std::size_t attempt = 0; attempt < 50 * want && out.size() < want; ++attempt) {
        std::vector<std::int64_t> f(g.n(), 0);
        bool any = false, all = true;
        for (Vertex v = 0; v < g.n(); ++v) {
            f[v] = static_cast<std::int64_t>(rng() & 1);
            any |= f[v] != 0;
            all &= f[v] != 0;
        }
        if (!any || all)
            continue;
        if (rng() & 1)
            for (auto& x : f)
                x = -x;
        const Divisor next = chipfire::testing::apply_script(g, cur, f);
        if (!is_effective_outside(next, q))
            continue;
        cur = next;
        if (cur != d)
            out.push_back(cur);
        if (rng() % 4 == 0)
            cur = d;
    }
    return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1. Matrix-tree: determinant count, enumerated trees and Jacobian order agree.
Outcome matrix_tree(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t graphs = 0;
    for (const auto& [name, g] : corpus) {
        const BigInt det = count_spanning_trees(g);
        const auto brute = chipfire::testing::enumerate_spanning_trees(g).size();
        const BigInt order = jacobian(g, 0).order();
        o.check(det == static_cast<unsigned long>(brute) && order == det,
                name + ": det=" + det.get_str() + " enum=" + std::to_string(brute) + " |Jac|=" + order.get_str());
        ++graphs;
    }
    const double secs = seconds_since(t0);
    o.check(secs < 60.0, "runtime " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << graphs << " graphs, " << secs << " s";
    o.detail = s.str();
    return o;
}

// 2. Reduced divisors: Dhar, the subset definition, and strict minimization of E_q and b_q.
Outcome uniqueness_and_minimization(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    std::mt19937_64 rng(0xC0FFEE);
    std::size_t divisors = 0, comparisons = 0;
    for (const auto& [name, g] : corpus) {
        std::vector<PotentialTable> tables;
        for (Vertex q = 0; q < g.n(); ++q)
            tables.emplace_back(g, q);
        for (int k = 0; k < 50; ++k) {
            const Vertex q = rng() % g.n();
            const Divisor d = random_divisor(rng, g.n(), 7);
            const auto& t = tables[q];
            const Divisor r = reduce(g, t, d).result;
            const std::string tag = name + " q=" + std::to_string(q) + " D=" + show(d);
            o.check(dhar(g, q, r).reduced, tag + ": fails Dhar");
            o.check(chipfire::testing::reduced_by_subsets(g, q, r), tag + ": fails subset definition");
            o.check(is_linearly_equivalent(t, r, d).has_value(), tag + ": not equivalent");
            const Rational e = t.q_energy(r), b = t.b(r);
            for (const Divisor& other : class_members(g, q, r, 100, rng)) {
                o.check(e < t.q_energy(other) && b < t.b(other), tag + ": not minimal against " + show(other));
                ++comparisons;
            }
            ++divisors;
        }
    }
    o.detail = std::to_string(divisors) + " divisors, " + std::to_string(comparisons) + " class members";
    return o;
}

// 3. Monovariant accounting and move bounds.
Outcome monovariant(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    std::mt19937_64 rng(0xB0B);
    std::size_t runs = 0, set_firings = 0, skipped = 0;
    for (const auto& [name, g] : corpus) {
        for (Vertex q = 0; q < g.n(); ++q) {
            const PotentialTable t(g, q);
            const MoveBounds mb = move_bounds(g, t);
            o.check(mb.exact_potential <= mb.resistance && mb.resistance <= mb.diameter,
                    name + ": bound chain " + mb.exact_potential.get_str() + " <= " + mb.resistance.get_str() +
                        " <= " + mb.diameter.get_str());
        }
        if (g.n() < 2) {
            ++skipped;  // both bounds are 0 and there is nothing to move
            continue;
        }
        for (int k = 0; k < 50; ++k) {
            const Vertex q = rng() % g.n();
            const PotentialTable t(g, q);
            const MoveBounds mb = move_bounds(g, t);
            const Divisor d = random_divisor(rng, g.n(), 9);
            const auto rep = reduce(g, t, d);
            const std::string tag = name + " q=" + std::to_string(q) + " D=" + show(d);
            Divisor cur = rep.after_step2;
            for (const auto& a : rep.fired_sets) {
                const Divisor next = fire_set(g, cur, a);
                o.check(t.b(cur) - t.b(next) == Rational(static_cast<unsigned long>(a.size())),
                        tag + ": b_q drop differs from |A|");
                cur = next;
                ++set_firings;
            }
            o.check(cur == rep.result, tag + ": replayed firings disagree");
            const Rational moves(static_cast<unsigned long>(rep.total_moves()));
            o.check(moves < mb.exact_potential, tag + ": moves " + moves.get_str() + " not below exact bound");
            o.check(moves < mb.resistance, tag + ": moves not below resistance bound");
            // Step 2 borrowings are bounded by b_q(K+ - D1), Step 3 vertex firings by b_q(D2).
            o.check(Rational(static_cast<unsigned long>(rep.moves_step2)) <= t.b(k_plus(g) - rep.after_step1),
                    tag + ": Step 2 exceeds b_q(K+ - D1)");
            o.check(Rational(static_cast<unsigned long>(rep.total_set_fire_vertices)) <= t.b(rep.after_step2),
                    tag + ": Step 3 exceeds b_q(D2)");
            ++runs;

            // Steps 1-2 tend to land on the reduced divisor already, so run
            // Step 3 directly from an effective start that is far from reduced.
            Divisor start(g.n());
            for (Vertex v = 0; v < g.n(); ++v)
                start[v] = static_cast<std::int64_t>(rng() % (2 * g.degree(v) + 1));
            const auto step3 = fire_to_reduced(g, t, start);
            const std::string tag3 = name + " q=" + std::to_string(q) + " Step 3 from " + show(start);
            cur = start;
            for (const auto& a : step3.fired_sets) {
                o.check(dhar(g, q, cur).unburnt == a, tag3 + ": fired set is not Dhar's unburnt set");
                const Divisor next = fire_set(g, cur, a);
                o.check(t.b(cur) - t.b(next) == Rational(static_cast<unsigned long>(a.size())),
                        tag3 + ": b_q drop differs from |A|");
                cur = next;
                ++set_firings;
            }
            o.check(cur == step3.result && step3.result == reduce(g, t, start).result,
                    tag3 + ": Step 3 does not reach the reduced divisor");
            o.check(Rational(static_cast<unsigned long>(step3.total_set_fire_vertices)) <= t.b(start),
                    tag3 + ": Step 3 exceeds b_q(D2)");
            o.check(Rational(static_cast<unsigned long>(step3.total_set_fire_vertices)) < mb.exact_potential,
                    tag3 + ": firings not below exact bound");
        }
    }
    o.detail = std::to_string(runs) + " reductions, " + std::to_string(set_firings) + " set-firings, " +
               std::to_string(skipped) + " one-vertex graph(s) checked for the bound chain only";
    return o;
}

// 4. Tree bijection over every spanning tree of every corpus graph.
Outcome bijection(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    std::size_t cases = 0;
    for (const auto& [name, g] : corpus) {
        const auto trees = chipfire::testing::enumerate_spanning_trees(g);
        for (Vertex q = 0; q < g.n(); ++q)
            for (std::int64_t d : {g.genus(), std::int64_t{0}}) {
                std::set<std::vector<std::int64_t>> images;
                for (const auto& t : trees) {
                    const std::string tag = name + " q=" + std::to_string(q) + " d=" + std::to_string(d);
                    const TreeDivisor forward = tree_to_divisor_detailed(g, q, t, d);
                    images.insert({forward.divisor.begin(), forward.divisor.end()});
                    const SpanningTree back = divisor_to_tree(g, q, forward.divisor);
                    o.check(back.tree_edges == t, tag + ": round trip changed the tree");
                    o.check(tree_to_divisor(g, q, back.tree_edges, d) == forward.divisor,
                            tag + ": round trip changed the divisor");
                    auto r_set = [](const SpanningTree& s) {
                        std::vector<EdgeIndex> r = s.tree_edges;
                        r.insert(r.end(), s.ext_passive.begin(), s.ext_passive.end());
                        std::sort(r.begin(), r.end());
                        return r;
                    };
                    o.check(r_set(back) == r_set(forward.tree), tag + ": burnt edge sets differ");
                    const auto [active, passive] = chipfire::testing::activity_by_cycles(g, t);
                    o.check(back.ext_active == active && back.ext_passive == passive,
                            tag + ": activity differs from the cycle oracle");
                    o.check(forward.divisor[q] == d - g.genus() + static_cast<std::int64_t>(active.size()),
                            tag + ": a_q != d - g + ex(T)");
                    ++cases;
                }
                o.check(images.size() == trees.size(), name + ": divisors not distinct");
            }
    }
    o.detail = std::to_string(cases) + " (tree, q, d) cases";
    return o;
}

// 5. Sampler: exhaustive bijection, reproducibility, chi-square on K4.
Outcome sampler() {
    Outcome o;
    using chipfire::testing::complete_graph;
    using chipfire::testing::cycle_graph;
    for (const auto& [name, g] : std::vector<NamedGraph>{
             {"K3", complete_graph(3)}, {"K4", complete_graph(4)}, {"C5", cycle_graph(5)}}) {
        const SpanningTreeSampler s(g, 0);
        const auto& f = s.presentation().invariant_factors;
        std::map<std::vector<EdgeIndex>, int> hits;
        std::vector<BigInt> c(f.size(), BigInt(0));
        for (;;) {
            ++hits[s.tree_for(c).tree_edges];
            std::size_t i = 0;
            while (i < c.size() && ++c[i] == f[i])
                c[i++] = 0;
            if (i == c.size())
                break;
        }
        const auto all = chipfire::testing::enumerate_spanning_trees(g);
        bool bijective = hits.size() == all.size();
        for (const auto& t : all)
            bijective &= hits.count(t) == 1 && hits[t] == 1;
        o.check(bijective, name + ": group elements do not map bijectively onto trees");
    }

    const Graph k4 = complete_graph(4);
    const std::uint64_t seed = 20100419;
    const std::size_t count = 16000;
    const auto first = sample_spanning_tree(k4, 0, seed, count);
    const auto second = sample_spanning_tree(k4, 0, seed, count);
    o.check(first == second, "K4: repeated seeded run differs");

    std::map<std::vector<EdgeIndex>, int> counts;
    for (const auto& t : chipfire::testing::enumerate_spanning_trees(k4))
        counts[t] = 0;
    for (const auto& t : first)
        ++counts[t.tree_edges];
    o.check(counts.size() == 16, "K4: sampled a non-tree");
    const double expected = static_cast<double>(count) / 16.0;
    double chi2 = 0;
    for (const auto& [t, c] : counts)
        chi2 += (c - expected) * (c - expected) / expected;
    // Upper 0.001 quantile of chi-square with 15 degrees of freedom.
    const double critical = 37.69729821835383;
    o.check(chi2 < critical, "K4: chi-square " + std::to_string(chi2));
    std::ostringstream s;
    s << "chi2=" << chi2 << " < " << critical << " (df 15, alpha 0.001, seed " << seed << ")";
    o.detail = s.str();
    return o;
}

// 6. Cycle game on C5: termination and exact energy decrements.
Outcome pentagon() {
    Outcome o;
    const Graph c5 = chipfire::testing::cycle_graph(5);
    const auto tables = all_tables(c5);
    std::mt19937_64 rng(5);
    std::size_t moves = 0, played = 0;
    while (played < 100) {
        const Divisor d = random_divisor(rng, 5, 6);
        const std::int64_t s = degree(d);
        if (s < 1)
            continue;
        ++played;
        const CycleGame game = play_cycle_game(c5, d, 100000);
        const std::string tag = "start " + show(d);
        o.check(game.terminated, tag + ": did not terminate");
        o.check(is_effective(game.final_divisor), tag + ": final configuration has a negative value");
        Divisor cur = d;
        for (const auto& m : game.moves) {
            std::vector<std::int64_t> f(5, 0);
            f[m.vertex] = -m.y;
            const Divisor next = chipfire::testing::apply_script(c5, cur, f);
            const Rational before = total_energy(tables, cur), after = total_energy(tables, next);
            o.check(m.y == cur[m.vertex] && m.y < 0, tag + ": move at a nonnegative vertex");
            o.check(after - before == to_rational(2 * s * m.y), tag + ": energy change is not 2sy");
            o.check(m.energy_before == before && m.energy_after == after, tag + ": logged energies disagree");
            cur = next;
            ++moves;
        }
        o.check(cur == game.final_divisor, tag + ": replay disagrees");
    }
    o.detail = std::to_string(played) + " games, " + std::to_string(moves) + " moves";
    return o;
}

// 7. Metric graphs.
Outcome metric(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    std::size_t iterations = 0, agreements = 0;
    auto check_steps = [&](const MetricGraph& g, const GraphPoint& base, const MetricReduction& red,
                           const std::string& tag) {
        TropicalFunction partial = red.effective_move;
        for (const auto& s : red.steps) {
            // Least action: every iterate is result + Delta(h) with h lowest at q.
            partial += s.move;
            const TropicalFunction h = partial - red.total;
            o.check(s.after == red.result + metric_laplacian(g, h) && h.value_at(base) == h.min_value(),
                    tag + ": least action fails on a logged iterate");
            o.check(s.b_before && s.b_after && *s.b_before - *s.b_after == s.predicted_drop,
                    tag + ": b_q drop differs from l(X)eps + outdeg eps^2/2");
            o.check(s.predicted_drop == s.component.length * s.epsilon +
                                            Rational(static_cast<unsigned long>(s.component.outdegree)) * s.epsilon *
                                                s.epsilon / 2,
                    tag + ": predicted drop misreported");
            ++iterations;
        }
        o.check(red.result == red.input + metric_laplacian(g, red.total), tag + ": result not equivalent");
    };

    const MetricGraph seg = MetricGraph::unit(Graph(2, {{0, 1}}));
    const GraphPoint q = GraphPoint::at_vertex(0), a = GraphPoint::at_vertex(1);
    MetricDivisor two_a, two_q;
    two_a.add(a, 2);
    two_q.add(q, 2);
    const auto red = metric_reduce(seg, q, two_a);
    o.check(red.result == two_q, "segment: result is not 2(q)");
    o.check(red.steps.size() == 2, "segment: expected two iterations");
    for (const auto& s : red.steps)
        o.check(s.epsilon == 1 && s.predicted_drop == Rational(1, 2) && *s.b_before - *s.b_after == Rational(1, 2),
                "segment: drop is not 1/2 with eps 1");
    check_steps(seg, q, red, "segment");

    std::mt19937_64 rng(77);
    for (const auto& [name, g] : corpus) {
        const MetricGraph mg = MetricGraph::unit(g);
        for (int k = 0; k < 3; ++k) {
            const Vertex qv = rng() % g.n();
            const Divisor d = random_divisor(rng, g.n(), 3);
            const auto mr = metric_reduce(mg, GraphPoint::at_vertex(qv), metric_divisor(d));
            const std::string tag = name + " q=" + std::to_string(qv) + " D=" + show(d);
            o.check(vertex_divisor(mr.result, g.n()) == reduce(g, qv, d).result, tag + ": differs from reduce");
            check_steps(mg, GraphPoint::at_vertex(qv), mr, tag);
            ++agreements;
        }
    }

    // Rational lengths and divisors supported inside edges.
    for (int k = 0; k < 25; ++k) {
        Graph base = chipfire::testing::random_multigraph(rng, 2 + rng() % 3, rng() % 3);
        std::vector<Rational> lengths;
        for (std::size_t e = 0; e < base.m(); ++e) {
            Rational l(static_cast<long>(1 + rng() % 5), static_cast<unsigned long>(1 + rng() % 3));
            l.canonicalize();
            lengths.push_back(l);
        }
        const MetricGraph mg(std::move(base), std::move(lengths));
        MetricDivisor d;
        for (int i = 0; i < 3; ++i) {
            const EdgeIndex e = rng() % mg.m();
            Rational quarter(static_cast<long>(rng() % 5), 4);
            quarter.canonicalize();
            d.add(point_on_edge(mg, e, mg.length(e) * quarter),
                  static_cast<std::int64_t>(rng() % 4) - 1);
        }
        const auto mr = metric_reduce(mg, q, d);
        const std::string tag = "random metric graph " + std::to_string(k) + " D=" + format_metric_divisor(d);
        o.check(metric_is_reduced(mg, q, mr.result), tag + ": result not reduced");
        check_steps(mg, q, mr, tag);
    }
    o.detail = std::to_string(agreements) + " unit-length agreements, " + std::to_string(iterations) +
               " epsilon-moves checked";
    return o;
}

// 8. Dollar game and rank.
Outcome dollar_game(const std::vector<NamedGraph>& corpus) {
    Outcome o;
    std::size_t divisors = 0;
    for (const auto& [name, g] : corpus) {
        if (g.n() > 4)
            continue;
        const PotentialTable t(g, 0);
        Divisor d(g.n());
        std::function<void(Vertex)> each = [&](Vertex v) {
            if (v == g.n()) {
                const bool fast = winnable(g, t, d).has_value();
                const bool brute = chipfire::testing::bounded_winning_script(g, d, 12).has_value();
                const bool listed = chipfire::testing::winnable_by_enumeration(t, d);
                o.check(fast == brute && fast == listed,
                        name + " D=" + show(d) + ": winnable=" + (fast ? "yes" : "no") + " script search=" +
                            (brute ? "yes" : "no") + " enumeration=" + (listed ? "yes" : "no"));
                ++divisors;
                return;
            }
            for (std::int64_t k = -2; k <= 2; ++k) {
                d[v] = k;
                each(v + 1);
            }
        };
        each(0);
    }
    std::string ranks;
    using chipfire::testing::complete_graph;
    using chipfire::testing::cycle_graph;
    for (const auto& [name, g] : std::vector<NamedGraph>{
             {"C4", cycle_graph(4)}, {"C5", cycle_graph(5)}, {"K4", complete_graph(4)}}) {
        const PotentialTable t(g, 0);
        const Divisor k = canonical_divisor(g);
        const std::int64_t genus = g.genus();
        const bool ok = rank_at_least(g, t, k, genus - 1) && !rank_at_least(g, t, k, genus);
        const std::int64_t brute = chipfire::testing::rank_by_enumeration(t, k);
        o.check(ok && brute == genus - 1, name + ": r(K) is not g - 1 (brute force " + std::to_string(brute) + ")");
        ranks += " " + name + ":r(K)=" + std::to_string(brute);
    }
    o.detail = std::to_string(divisors) + " divisors on n <= 4 graphs;" + ranks;
    return o;
}

} // namespace

int main() {
    const auto corpus = chipfire::testing::corpus();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"matrix-tree cross-check", [&] { return matrix_tree(corpus); }},
        {"reduced-divisor uniqueness and minimization", [&] { return uniqueness_and_minimization(corpus); }},
        {"monovariant accounting and move bounds", [&] { return monovariant(corpus); }},
        {"tree bijection suite", [&] { return bijection(corpus); }},
        {"spanning-tree sampler", [] { return sampler(); }},
        {"pentagon energy decrements", [] { return pentagon(); }},
        {"metric suite", [&] { return metric(corpus); }},
        {"dollar game and rank", [&] { return dollar_game(corpus); }},
    };
    std::printf("corpus: %zu graphs\n", corpus.size());
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu: %s %s [%s] (%.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
        for (const auto& f : o.failures)
            std::printf("    %s\n", f.c_str());
        failed += !o.pass;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}

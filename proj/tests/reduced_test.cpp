#include "chipfire/equivalence.hpp"
#include "chipfire/reduced.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace chipfire;
using chipfire::testing::complete_graph;
using chipfire::testing::cycle_graph;

namespace {

Divisor random_divisor(std::mt19937_64& rng, std::size_t n, int spread) {
    Divisor d(n);
    for (Vertex v = 0; v < n; ++v)
        d[v] = static_cast<std::int64_t>(rng() % (2 * spread + 1)) - spread;
    return d;
}

} // namespace

TEST(Dhar, SmallCases) {
    const Graph k3 = complete_graph(3);
    const auto ok = dhar(k3, 2, Divisor{0, 0, 0});
    EXPECT_TRUE(ok.reduced);
    EXPECT_EQ(ok.burn_order, (std::vector<Vertex>{2, 0, 1}));

    const auto stuck = dhar(k3, 2, Divisor{1, 1, 0});
    EXPECT_FALSE(stuck.reduced);
    EXPECT_EQ(stuck.unburnt, (std::vector<Vertex>{0, 1}));

    const auto debt = dhar(k3, 2, Divisor{-1, 2, 0});
    EXPECT_FALSE(debt.reduced);
    EXPECT_EQ(debt.negative, (std::vector<Vertex>{0}));
    // q may hold anything.
    EXPECT_TRUE(dhar(k3, 2, Divisor{0, 0, -9}).reduced);
}

TEST(Dhar, AgreesWithSubsetDefinition) {
    std::mt19937_64 rng(101);
    for (const auto& [name, g] : chipfire::testing::corpus())
        for (int k = 0; k < 40; ++k) {
            const Vertex q = rng() % g.n();
            Divisor d(g.n());
            for (Vertex v = 0; v < g.n(); ++v)
                d[v] = static_cast<std::int64_t>(rng() % (g.degree(v) + 2)) - (rng() % 8 == 0);
            EXPECT_EQ(is_reduced(g, q, d), chipfire::testing::reduced_by_subsets(g, q, d)) << name;
        }
}

TEST(Reduce, MakeEffectiveSteps) {
    const Graph k3 = complete_graph(3);
    const auto a = make_effective(k3, 2, Divisor{-1, 0, 1});
    EXPECT_EQ(a.after_step1, (Divisor{0, 1, -1}));
    EXPECT_EQ(a.borrowings, 0u);
    const auto b = make_effective(k3, 2, Divisor{5, 0, 0});
    EXPECT_EQ(b.after_step1, (Divisor{0, 1, 4}));
    const auto c = make_effective(k3, 2, Divisor{1, 0, 0});
    EXPECT_EQ(c.borrowings, 0u);
    EXPECT_EQ(c.divisor, (Divisor{1, 0, 0}));
}

TEST(Reduce, Examples) {
    const Graph k3 = complete_graph(3);
    const auto five = reduce(k3, 2, Divisor{5, 0, 0});
    EXPECT_EQ(five.result, (Divisor{0, 1, 4}));
    EXPECT_EQ(five.total_moves(), 0u);

    const auto pair = reduce(k3, 2, Divisor{1, 1, 0});
    EXPECT_EQ(pair.result, (Divisor{0, 0, 2}));
    // Step 1 already performs the firing of {0,1} that Dhar certifies.
    EXPECT_EQ(pair.script.f, (VertexFunction{-1, -1, 0}));
    EXPECT_EQ(dhar(k3, 2, Divisor{1, 1, 0}).unburnt, (std::vector<Vertex>{0, 1}));
    EXPECT_EQ(pair.after_step1, pair.result);

    const auto fixed = reduce(k3, 2, Divisor{0, 1, 4});
    EXPECT_EQ(fixed.result, (Divisor{0, 1, 4}));
    EXPECT_EQ(fixed.total_moves(), 0u);
}

TEST(Reduce, CorpusProperties) {
    std::mt19937_64 rng(7);
    for (const auto& [name, g] : chipfire::testing::corpus())
        for (Vertex q = 0; q < g.n(); ++q) {
            const auto table = j_function(g, q);
            const auto bounds = move_bounds(g, table);
            for (int k = 0; k < 6; ++k) {
                const Divisor d = random_divisor(rng, g.n(), 6);
                const auto rep = reduce(g, table, d);
                EXPECT_TRUE(is_reduced(g, q, rep.result)) << name;
                EXPECT_TRUE(chipfire::testing::reduced_by_subsets(g, q, rep.result)) << name;
                EXPECT_EQ(degree(rep.result), degree(d)) << name;
                EXPECT_EQ(d + apply_laplacian(g, rep.script.f), rep.result) << name;
                EXPECT_TRUE(is_linearly_equivalent(table, rep.result, d)) << name;
                EXPECT_LE(Rational(static_cast<unsigned long>(rep.total_moves())), bounds.exact_potential) << name;
                // Idempotent.
                EXPECT_EQ(reduce(g, table, rep.result).result, rep.result) << name;
                // Unique per class: a shifted representative reduces to the same divisor.
                std::vector<std::int64_t> f(g.n());
                for (auto& x : f)
                    x = static_cast<std::int64_t>(rng() % 7) - 3;
                EXPECT_EQ(reduce(g, table, chipfire::testing::apply_script(g, d, f)).result, rep.result) << name;
            }
        }
}

TEST(Reduce, SetFiringsFollowDhar) {
    std::mt19937_64 rng(19);
    std::size_t fired = 0;
    for (const auto& [name, g] : chipfire::testing::corpus())
        for (Vertex q = 0; q < g.n(); ++q) {
            const auto table = j_function(g, q);
            for (int k = 0; k < 5; ++k) {
                // Full reductions, then Step 3 from an effective start far from reduced.
                Divisor start(g.n());
                for (Vertex v = 0; v < g.n(); ++v)
                    start[v] = static_cast<std::int64_t>(rng() % (2 * g.degree(v) + 1));
                for (const auto& rep : {reduce(g, table, random_divisor(rng, g.n(), 5)), fire_to_reduced(g, table, start)}) {
                    Divisor cur = rep.after_step2;
                    for (const auto& a : rep.fired_sets) {
                        EXPECT_EQ(dhar(g, q, cur).unburnt, a) << name;
                        const Divisor next = fire_set(g, cur, a);
                        EXPECT_EQ(table.b(cur) - table.b(next), Rational(static_cast<unsigned long>(a.size()))) << name;
                        cur = next;
                        ++fired;
                    }
                    EXPECT_EQ(cur, rep.result) << name;
                    EXPECT_LE(Rational(static_cast<unsigned long>(rep.total_set_fire_vertices)), table.b(rep.after_step2)) << name;
                }
                EXPECT_EQ(fire_to_reduced(g, table, start).result, reduce(g, table, start).result) << name;
            }
        }
    EXPECT_GT(fired, 0u);
    EXPECT_THROW(fire_to_reduced(complete_graph(3), j_function(complete_graph(3), 2), Divisor{-1, 0, 0}),
                 std::invalid_argument);
}

TEST(Reduce, SmallRepresentativeBounds) {
    // After Step 1 every vertex other than q satisfies |D(v)| < deg(v).
    std::mt19937_64 rng(23);
    for (const auto& [name, g] : chipfire::testing::corpus()) {
        if (g.n() < 2)
            continue;
        const Vertex q = rng() % g.n();
        const auto table = j_function(g, q);
        for (int k = 0; k < 10; ++k) {
            const auto small = small_representative(g, table, random_divisor(rng, g.n(), 40));
            for (Vertex v = 0; v < g.n(); ++v)
                if (v != q) {
                    EXPECT_LT(std::abs(small.divisor[v]), static_cast<std::int64_t>(g.degree(v))) << name;
                }
        }
    }
}

TEST(Reduce, MinimizesEnergyAndPotential) {
    std::mt19937_64 rng(41);
    const Graph k3 = complete_graph(3);
    EXPECT_TRUE(verify_minimizer(k3, 2, Divisor{0, 0, 5}, 50, 1));
    EXPECT_TRUE(verify_minimizer(k3, 2, Divisor{0, 1, 4}, 50, 2));
    EXPECT_THROW(verify_minimizer(k3, 2, Divisor{1, 1, 0}, 5), std::invalid_argument);

    // Sampled members really are in |D|_q.
    const Graph c5 = cycle_graph(5);
    LinearSystemWalker walker(c5, 0, 9);
    const Divisor d{3, 1, 0, 2, 1};
    for (int k = 0; k < 50; ++k) {
        const Divisor e = walker.walk(d, 3);
        EXPECT_TRUE(is_effective_outside(e, 0));
        EXPECT_TRUE(is_linearly_equivalent(c5, e, d, 0));
    }
}

TEST(Reduce, BoundExamples) {
    const auto b = move_bounds(complete_graph(3), 2);
    EXPECT_EQ(b.exact_potential, 12);
    EXPECT_EQ(b.resistance, 16);
    EXPECT_EQ(b.graph_diameter, 1u);
    EXPECT_EQ(b.max_effective_resistance, Rational(2, 3));
    EXPECT_NEAR(b.lambda1, 3.0, 1e-9);
    for (const auto& [name, g] : chipfire::testing::corpus())
        for (Vertex q = 0; q < g.n(); ++q) {
            const auto m = move_bounds(g, q);
            EXPECT_LE(m.exact_potential, m.resistance) << name;
            EXPECT_LE(m.resistance, m.max_resistance_sum) << name;
            EXPECT_LE(m.max_resistance_sum, m.max_resistance) << name;
            EXPECT_LE(m.max_resistance_sum, m.diameter) << name;
            EXPECT_LE(m.max_effective_resistance, Rational(static_cast<unsigned long>(m.graph_diameter))) << name;
        }
}

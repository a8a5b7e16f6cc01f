#pragma once

// The cycle game: while some vertex holds y < 0, replace its neighbours'
// values x, z and its own by x + y, z + y and -y. Total q-energy summed over
// all q drops by exactly -2 s y per move, where s is the (positive) degree.

#include "chipfire/potential.hpp"

#include <stdexcept>
#include <vector>

namespace chipfire {

inline void check_cycle(const Graph& g) {
    for (Vertex v = 0; v < g.n(); ++v)
        if (g.degree(v) != 2)
            throw std::invalid_argument("cycle game needs every vertex to have degree 2");
}

/// Sum over q of E_q(D), using one table per base vertex.
inline Rational total_energy(std::span<const PotentialTable> tables, const Divisor& d) {
    Rational out = 0;
    for (const auto& t : tables)
        out += t.q_energy(d);
    return out;
}

inline std::vector<PotentialTable> all_tables(const Graph& g) {
    std::vector<PotentialTable> out;
    for (Vertex q = 0; q < g.n(); ++q)
        out.emplace_back(g, q);
    return out;
}

/// One move at v: D + (-y) Delta(chi_v) with y = D(v) < 0.
inline Divisor cycle_move(const Graph& g, const Divisor& d, Vertex v) {
    g.check_vertex(v);
    if (d[v] >= 0)
        throw std::invalid_argument("cycle move needs a negative vertex");
    const std::int64_t y = d[v];
    Divisor out = d;
    out[v] -= 2 * y;
    for (EdgeIndex e : g.incident(v))
        out[g.edge(e).other(v)] += y;
    return out;
}

struct CycleMove {
    Vertex vertex;
    std::int64_t y;
    Rational energy_before;
    Rational energy_after;
};

struct CycleGame {
    Divisor final_divisor;
    std::vector<CycleMove> moves;
    bool terminated = false;
};

/// Plays from `d`, always moving at the lowest negative vertex, until every
/// value is nonnegative or `max_moves` is reached.
inline CycleGame play_cycle_game(const Graph& g, Divisor d, std::size_t max_moves) {
    check_cycle(g);
    if (degree(d) < 1)
        throw std::invalid_argument("cycle game needs a positive total");
    const auto tables = all_tables(g);
    CycleGame game;
    Rational energy = total_energy(tables, d);
    for (;;) {
        Vertex v = 0;
        while (v < g.n() && d[v] >= 0)
            ++v;
        if (v == g.n()) {
            game.terminated = true;
            break;
        }
        if (game.moves.size() >= max_moves)
            break;
        const std::int64_t y = d[v];
        d = cycle_move(g, d, v);
        const Rational next = total_energy(tables, d);
        game.moves.push_back({v, y, energy, next});
        energy = next;
    }
    game.final_divisor = std::move(d);
    return game;
}

} // namespace chipfire

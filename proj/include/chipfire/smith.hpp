#pragma once

// Smith normal form over the integers by elementary row and column
// operations, with the row transform's inverse tracked alongside it.

#include "chipfire/matrix.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace chipfire {

/// S = U * M * V with U, V unimodular and S diagonal with s_1 | s_2 | ...
/// `u_inverse` is U^-1; its columns map cokernel coordinates back to the
/// codomain of M.
struct SmithDecomposition {
    IntMatrix u;
    IntMatrix s;
    IntMatrix v;
    IntMatrix u_inverse;

    std::vector<BigInt> diagonal() const {
        std::vector<BigInt> out;
        for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
            out.push_back(s(i, i));
        return out;
    }
};

namespace detail {

class SmithWorker {
public:
    explicit SmithWorker(const IntMatrix& m)
        : s_(m), u_(IntMatrix::identity(m.rows())), ui_(IntMatrix::identity(m.rows())),
          v_(IntMatrix::identity(m.cols())) {}

    SmithDecomposition run() {
        const std::size_t r = s_.rows(), c = s_.cols();
        for (std::size_t t = 0; t < std::min(r, c); ++t) {
            if (!settle_pivot(t))
                break;
        }
        return {std::move(u_), std::move(s_), std::move(v_), std::move(ui_)};
    }

private:
    // row_i += k * row_j
    void add_row(std::size_t i, std::size_t j, const BigInt& k) {
        for (std::size_t col = 0; col < s_.cols(); ++col)
            s_(i, col) += k * s_(j, col);
        for (std::size_t col = 0; col < u_.cols(); ++col)
            u_(i, col) += k * u_(j, col);
        // U' = E U with E = I + k e_i e_j^T, so U'^-1 = U^-1 (I - k e_i e_j^T).
        for (std::size_t row = 0; row < ui_.rows(); ++row)
            ui_(row, j) -= k * ui_(row, i);
    }
    // col_i += k * col_j
    void add_col(std::size_t i, std::size_t j, const BigInt& k) {
        for (std::size_t row = 0; row < s_.rows(); ++row)
            s_(row, i) += k * s_(row, j);
        for (std::size_t row = 0; row < v_.rows(); ++row)
            v_(row, i) += k * v_(row, j);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        s_.swap_rows(a, b);
        u_.swap_rows(a, b);
        ui_.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        s_.swap_cols(a, b);
        v_.swap_cols(a, b);
    }
    void negate_row(std::size_t i) {
        for (std::size_t col = 0; col < s_.cols(); ++col)
            s_(i, col) = -s_(i, col);
        for (std::size_t col = 0; col < u_.cols(); ++col)
            u_(i, col) = -u_(i, col);
        for (std::size_t row = 0; row < ui_.rows(); ++row)
            ui_(row, i) = -ui_(row, i);
    }

    std::optional<std::pair<std::size_t, std::size_t>> smallest_entry(std::size_t t) const {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < s_.rows(); ++i)
            for (std::size_t j = t; j < s_.cols(); ++j) {
                if (s_(i, j) == 0)
                    continue;
                if (!best || abs(s_(i, j)) < abs(s_(best->first, best->second)))
                    best = {i, j};
            }
        return best;
    }

    /// Brings a divisor of every remaining entry to (t, t) and clears its row
    /// and column. Returns false when the remaining block is zero.
    bool settle_pivot(std::size_t t) {
        for (;;) {
            const auto pos = smallest_entry(t);
            if (!pos)
                return false;
            swap_rows(t, pos->first);
            swap_cols(t, pos->second);

            bool clean = true;
            BigInt quotient;
            for (std::size_t i = t + 1; i < s_.rows(); ++i) {
                if (s_(i, t) == 0)
                    continue;
                mpz_tdiv_q(quotient.get_mpz_t(), s_(i, t).get_mpz_t(), s_(t, t).get_mpz_t());
                add_row(i, t, BigInt(-quotient));
                if (s_(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < s_.cols(); ++j) {
                if (s_(t, j) == 0)
                    continue;
                mpz_tdiv_q(quotient.get_mpz_t(), s_(t, j).get_mpz_t(), s_(t, t).get_mpz_t());
                add_col(j, t, BigInt(-quotient));
                if (s_(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            // Divisibility chain: pull any offending row into the pivot row.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < s_.rows() && divides_all; ++i)
                for (std::size_t j = t + 1; j < s_.cols(); ++j)
                    if (!mpz_divisible_p(s_(i, j).get_mpz_t(), s_(t, t).get_mpz_t())) {
                        add_row(t, i, BigInt(1));
                        divides_all = false;
                        break;
                    }
            if (!divides_all)
                continue;
            if (s_(t, t) < 0)
                negate_row(t);
            return true;
        }
    }

    IntMatrix s_, u_, ui_, v_;
};

} // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& m) { return detail::SmithWorker(m).run(); }

} // namespace chipfire

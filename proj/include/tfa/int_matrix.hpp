#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tfa/rational.hpp"

namespace tfa {

// Dense integer matrix, row-major. Must be nonempty.
class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix: empty matrix");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Int& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < rows_; ++r) std::swap(at(r, i), at(r, j));
    }
    void negate_col(std::size_t j) {
        for (std::size_t r = 0; r < rows_; ++r) at(r, j) = -at(r, j);
    }
    // col_j -= q * col_i
    void submul_col(std::size_t j, const Int& q, std::size_t i) {
        for (std::size_t r = 0; r < rows_; ++r) at(r, j) -= q * at(r, i);
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

// Column-style Hermite normal form: H = M * U with U unimodular.
// Pivot rows carry positive pivots, zeros to the right of each pivot,
// and entries left of a pivot reduced into [0, pivot).
struct HermiteForm {
    IntMatrix H;
    IntMatrix U;
    std::size_t rank;
    std::vector<std::size_t> pivot_rows;  // pivot_rows[j] = row of column j's pivot, j < rank
};

// Deterministic pivot policy: rows in increasing order; within a row the
// entry of smallest absolute value among the active columns, ties broken
// by the leftmost column. Column signs normalized so pivots stay positive.
inline HermiteForm hnf(const IntMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    HermiteForm hf{m, IntMatrix(cols, cols), 0, {}};
    for (std::size_t i = 0; i < cols; ++i) hf.U.at(i, i) = 1;

    std::size_t col = 0;
    for (std::size_t row = 0; row < rows && col < cols; ++row) {
        for (;;) {
            std::size_t best = cols;
            for (std::size_t j = col; j < cols; ++j) {
                const Int& v = hf.H.at(row, j);
                if (v == 0) continue;
                if (best == cols ||
                    mpz_cmpabs(v.get_mpz_t(), hf.H.at(row, best).get_mpz_t()) < 0)
                    best = j;
            }
            if (best == cols) break;  // row has no pivot among active columns
            if (hf.H.at(row, best) < 0) {
                hf.H.negate_col(best);
                hf.U.negate_col(best);
            }
            if (best != col) {
                hf.H.swap_cols(col, best);
                hf.U.swap_cols(col, best);
            }
            bool cleared = true;
            for (std::size_t j = col + 1; j < cols; ++j) {
                if (hf.H.at(row, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), hf.H.at(row, j).get_mpz_t(),
                           hf.H.at(row, col).get_mpz_t());
                if (q != 0) {
                    hf.H.submul_col(j, q, col);
                    hf.U.submul_col(j, q, col);
                }
                if (hf.H.at(row, j) != 0) cleared = false;
            }
            if (cleared) {
                for (std::size_t k = 0; k < col; ++k) {
                    if (hf.H.at(row, k) == 0) continue;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), hf.H.at(row, k).get_mpz_t(),
                               hf.H.at(row, col).get_mpz_t());
                    if (q != 0) {
                        hf.H.submul_col(k, q, col);
                        hf.U.submul_col(k, q, col);
                    }
                }
                hf.pivot_rows.push_back(row);
                ++col;
                break;
            }
        }
    }
    hf.rank = col;
    return hf;
}

// Solves H * w = v for integer w given a Hermite form (forward substitution
// down the pivot structure). Returns std::nullopt when no integer solution
// exists. Non-pivot trailing coordinates of w are zero.
inline std::optional<std::vector<Int>> hermite_solve(const HermiteForm& hf,
                                                     const std::vector<Int>& v) {
    if (v.size() != hf.H.rows()) throw std::invalid_argument("hermite_solve: size mismatch");
    std::vector<Int> residual = v;
    std::vector<Int> w(hf.H.cols(), Int(0));
    std::size_t j = 0;
    for (std::size_t row = 0; row < hf.H.rows(); ++row) {
        if (j < hf.rank && hf.pivot_rows[j] == row) {
            Int q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), residual[row].get_mpz_t(),
                        hf.H.at(row, j).get_mpz_t());
            if (r != 0) return std::nullopt;
            if (q != 0)
                for (std::size_t rr = row; rr < hf.H.rows(); ++rr)
                    residual[rr] -= q * hf.H.at(rr, j);
            w[j] = q;
            ++j;
        } else if (residual[row] != 0) {
            return std::nullopt;
        }
    }
    return w;
}

// z = U * w
inline std::vector<Int> apply_unimodular(const IntMatrix& u, const std::vector<Int>& w) {
    if (w.size() != u.cols()) throw std::invalid_argument("apply_unimodular: size mismatch");
    std::vector<Int> z(u.rows(), Int(0));
    for (std::size_t r = 0; r < u.rows(); ++r)
        for (std::size_t c = 0; c < u.cols(); ++c)
            if (w[c] != 0) z[r] += u.at(r, c) * w[c];
    return z;
}

// Fraction-free Bareiss determinant; used by tests to confirm |det U| = 1.
inline Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: square matrix required");
    const std::size_t n = m.rows();
    IntMatrix a = m;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t piv = n;
            for (std::size_t r = k + 1; r < n; ++r)
                if (a.at(r, k) != 0) { piv = r; break; }
            if (piv == n) return Int(0);
            for (std::size_t c = 0; c < n; ++c) std::swap(a.at(k, c), a.at(piv, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = exact_div(a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j), prev);
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
}

}  // namespace tfa

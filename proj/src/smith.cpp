// Smith normal form by alternating row/column Euclidean elimination with a
// smallest-pivot heuristic, divisibility fix-up, and sign normalization.
// Every decomposition is verified (U*M*V == D, unimodularity via Bareiss
// determinant, diagonal divisibility) before it is handed back.

#include "cpk/smith.hpp"

#include <cstdlib>
#include <stdexcept>

namespace cpk {

namespace {

// index (i,j) with i>=k, j>=k minimizing |m[i][j]| over nonzero entries; (-1,-1) if none
std::pair<int, int> smallest_nonzero(const IntMatrix& m, int k) {
    int bi = -1, bj = -1;
    bigint best = 0;
    for (int i = k; i < m.rows(); ++i)
        for (int j = k; j < m.cols(); ++j) {
            const bigint& v = m.at(i, j);
            if (v == 0) continue;
            bigint a = abs(v);
            if (bi < 0 || a < best) {
                bi = i;
                bj = j;
                best = a;
            }
        }
    return {bi, bj};
}

void verify(const IntMatrix& m, const SmithDecomposition& s) {
    if (s.u * m * s.v != s.d) throw std::logic_error("smith: U*M*V != D");
    bigint du = s.u.det(), dv = s.v.det();
    if (du != 1 && du != -1) throw std::logic_error("smith: U not unimodular");
    if (dv != 1 && dv != -1) throw std::logic_error("smith: V not unimodular");
    int n = std::min(s.d.rows(), s.d.cols());
    for (int i = 0; i < s.d.rows(); ++i)
        for (int j = 0; j < s.d.cols(); ++j)
            if (i != j && s.d.at(i, j) != 0) throw std::logic_error("smith: D not diagonal");
    for (int i = 0; i < n; ++i) {
        if (s.d.at(i, i) < 0) throw std::logic_error("smith: negative diagonal");
        if (i + 1 < n && s.d.at(i, i) != 0 && s.d.at(i + 1, i + 1) % s.d.at(i, i) != 0)
            throw std::logic_error("smith: divisibility chain broken");
        if (s.d.at(i, i) == 0 && i + 1 < n && s.d.at(i + 1, i + 1) != 0)
            throw std::logic_error("smith: zero before nonzero on diagonal");
    }
}

}  // namespace

SmithDecomposition smith_decompose(const IntMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    SmithDecomposition s;
    s.u = IntMatrix::identity(rows);
    s.v = IntMatrix::identity(cols);
    s.d = m;
    IntMatrix& d = s.d;

    int n = std::min(rows, cols);
    for (int k = 0; k < n; ++k) {
        auto [pi, pj] = smallest_nonzero(d, k);
        if (pi < 0) break;  // all remaining entries zero
        if (pi != k) {
            d.swap_rows(k, pi);
            s.u.swap_rows(k, pi);
        }
        if (pj != k) {
            d.swap_cols(k, pj);
            s.v.swap_cols(k, pj);
        }

        // Clear row k and column k; each Euclidean pass strictly shrinks the
        // pivot (truncated division), so this terminates.
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int i = k + 1; i < rows; ++i) {
                if (d.at(i, k) == 0) continue;
                bigint q = d.at(i, k) / d.at(k, k);  // truncated toward zero
                if (q != 0) {
                    d.add_row_multiple(i, k, -q);
                    s.u.add_row_multiple(i, k, -q);
                }
                if (d.at(i, k) != 0) {
                    // remainder smaller than pivot: swap it up and restart
                    d.swap_rows(k, i);
                    s.u.swap_rows(k, i);
                    dirty = true;
                }
            }
            for (int j = k + 1; j < cols; ++j) {
                if (d.at(k, j) == 0) continue;
                bigint q = d.at(k, j) / d.at(k, k);
                if (q != 0) {
                    d.add_col_multiple(j, k, -q);
                    s.v.add_col_multiple(j, k, -q);
                }
                if (d.at(k, j) != 0) {
                    d.swap_cols(k, j);
                    s.v.swap_cols(k, j);
                    dirty = true;
                }
            }
        }

        // Divisibility fix-up: if some later entry is not divisible by the
        // pivot, fold its row into row k (gcd shows up) and redo this step.
        bool redo = false;
        for (int i = k + 1; i < rows && !redo; ++i)
            for (int j = k + 1; j < cols && !redo; ++j)
                if (d.at(i, j) % d.at(k, k) != 0) {
                    d.add_row_multiple(k, i, 1);
                    s.u.add_row_multiple(k, i, 1);
                    redo = true;
                }
        if (redo) {
            --k;
            continue;
        }
    }

    for (int k = 0; k < n; ++k)
        if (d.at(k, k) < 0) {
            d.negate_row(k);
            s.u.negate_row(k);
        }

    s.rank = 0;
    for (int k = 0; k < n; ++k)
        if (d.at(k, k) != 0) ++s.rank;

    verify(m, s);
    return s;
}

IntMatrix kernel_basis(const IntMatrix& m) {
    // D = U M V diagonal; M (V e_j) = U^{-1} D e_j = 0 exactly when d_j = 0
    // (or j beyond the diagonal), so the kernel is spanned by those columns
    // of V.  V unimodular makes them primitive and jointly extendable.
    SmithDecomposition s = smith_decompose(m);
    int k = m.cols() - s.rank;
    IntMatrix ker(m.cols(), k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < m.cols(); ++i) ker.at(i, j) = s.v.at(i, s.rank + j);
    return ker;
}

std::optional<IntMatrix> solve_in_integers(const IntMatrix& m, const IntMatrix& b) {
    if (b.rows() != m.rows()) throw std::invalid_argument("solve_in_integers: shape mismatch");
    SmithDecomposition s = smith_decompose(m);
    IntMatrix c = s.u * b;  // D y = c with x = V y
    IntMatrix y(m.cols(), b.cols());
    int n = std::min(m.rows(), m.cols());
    for (int col = 0; col < b.cols(); ++col) {
        for (int i = 0; i < m.rows(); ++i) {
            const bigint& ci = c.at(i, col);
            if (i < n && s.d.at(i, i) != 0) {
                if (ci % s.d.at(i, i) != 0) return std::nullopt;
                y.at(i, col) = ci / s.d.at(i, i);
            } else if (ci != 0) {
                return std::nullopt;  // zero row of D must match zero rhs
            }
        }
    }
    IntMatrix x = s.v * y;
    if (m * x != b) throw std::logic_error("solve_in_integers: verification failed");
    return x;
}

bool in_column_span(const IntMatrix& m, const IntMatrix& b) {
    return solve_in_integers(m, b).has_value();
}

int int_rank(const IntMatrix& m) { return smith_decompose(m).rank; }

}  // namespace cpk

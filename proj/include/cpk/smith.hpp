#pragma once
// Smith normal form over Z with unimodular certificates, plus the linear-algebra
// helpers built on it: integer kernels, solving M x = b over Z, and membership
// in a column span.
//
// smith_decompose returns U, D, V with U*M*V == D, D diagonal with
// d_1 | d_2 | ... and d_i >= 0, and |det U| = |det V| = 1.  The postconditions
// are *checked* before returning — a wrong reduction throws instead of quietly
// corrupting every K-group downstream.

#include <optional>

#include "cpk/intmatrix.hpp"

namespace cpk {

struct SmithDecomposition {
    IntMatrix u;  // rows x rows, unimodular
    IntMatrix d;  // rows x cols, diagonal, divisibility chain
    IntMatrix v;  // cols x cols, unimodular
    int rank = 0;

    std::vector<bigint> diagonal() const {
        std::vector<bigint> out;
        int n = std::min(d.rows(), d.cols());
        for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
        return out;
    }
};

SmithDecomposition smith_decompose(const IntMatrix& m);

// Columns form a basis of { x : M x = 0 }.  Each column is primitive and the
// set extends to a basis of Z^cols (they are columns of a unimodular matrix).
IntMatrix kernel_basis(const IntMatrix& m);

// One integer solution X of M X = B (columnwise), if any exists.
std::optional<IntMatrix> solve_in_integers(const IntMatrix& m, const IntMatrix& b);

// Is every column of b in the integer column span of m?
bool in_column_span(const IntMatrix& m, const IntMatrix& b);

// Rank over Q (== rank of the Smith form).
int int_rank(const IntMatrix& m);

}  // namespace cpk

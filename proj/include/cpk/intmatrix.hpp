#pragma once
// Dense matrices over Z with arbitrary-precision entries.
//
// Everything downstream (Smith reduction, group presentations, K-group
// computations) works with exact integers; doubles never appear on this path.
// Entry growth during elimination is real (minors can be huge even for small
// graph matrices), hence cpp_int rather than int64.

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpk {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative shape");
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }

    // Small-literal constructor for tests: IntMatrix::from_rows({{1,2},{3,4}}).
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
        int r = static_cast<int>(rows.size());
        int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
        IntMatrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
            int j = 0;
            for (long long v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bigint& at(int i, int j) {
        check(i, j);
        return a_[static_cast<size_t>(i) * cols_ + j];
    }
    const bigint& at(int i, int j) const {
        check(i, j);
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
        IntMatrix p(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const bigint& v = at(i, k);
                if (v == 0) continue;
                for (int j = 0; j < o.cols_; ++j) p.at(i, j) += v * o.at(k, j);
            }
        return p;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("IntMatrix: shape mismatch in sum");
        IntMatrix s(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
        return s;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("IntMatrix: shape mismatch in difference");
        IntMatrix s(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
        return s;
    }

    IntMatrix operator-() const {
        IntMatrix s(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = -a_[i];
        return s;
    }

    IntMatrix scaled(const bigint& c) const {
        IntMatrix s(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = c * a_[i];
        return s;
    }

    // --- elementary row/column operations (used by the Smith reduction) ---

    void swap_rows(int i, int j) {
        for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
    }
    // row[dst] += c * row[src]
    void add_row_multiple(int dst, int src, const bigint& c) {
        for (int k = 0; k < cols_; ++k) at(dst, k) += c * at(src, k);
    }
    // col[dst] += c * col[src]
    void add_col_multiple(int dst, int src, const bigint& c) {
        for (int k = 0; k < rows_; ++k) at(k, dst) += c * at(k, src);
    }
    void negate_row(int i) {
        for (int k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
    }
    void negate_col(int j) {
        for (int k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
    }

    // --- slicing / stacking ---

    IntMatrix submatrix(int row0, int col0, int nrows, int ncols) const {
        IntMatrix s(nrows, ncols);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) s.at(i, j) = at(row0 + i, col0 + j);
        return s;
    }

    IntMatrix column(int j) const { return submatrix(0, j, rows_, 1); }

    // [A | B] side by side
    static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
        IntMatrix m(a.rows(), a.cols() + b.cols());
        for (int i = 0; i < a.rows(); ++i) {
            for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
        }
        return m;
    }

    static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols() != b.cols()) throw std::invalid_argument("vstack: col mismatch");
        IntMatrix m(a.rows() + b.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
        return m;
    }

    // Fraction-free Bareiss determinant; exact, no rationals needed.
    bigint det() const {
        if (rows_ != cols_) throw std::invalid_argument("det: not square");
        int n = rows_;
        if (n == 0) return 1;
        IntMatrix w(*this);
        bigint prev = 1;
        int sign = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (w.at(k, k) == 0) {
                int p = -1;
                for (int i = k + 1; i < n; ++i)
                    if (w.at(i, k) != 0) { p = i; break; }
                if (p < 0) return 0;
                w.swap_rows(k, p);
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j) {
                    bigint num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
                    // exact division by construction of the Bareiss scheme
                    w.at(i, j) = num / prev;
                }
            prev = w.at(k, k);
        }
        return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < rows_; ++i) {
            s += i == 0 ? "[" : " ";
            s += "[";
            for (int j = 0; j < cols_; ++j) {
                s += at(i, j).str();
                if (j + 1 < cols_) s += ", ";
            }
            s += "]";
            s += i + 1 < rows_ ? ",\n" : "]";
        }
        if (rows_ == 0) s = "[]";
        return s;
    }

private:
    void check(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("IntMatrix index (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") out of range for " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    int rows_, cols_;
    std::vector<bigint> a_;
};

}  // namespace cpk

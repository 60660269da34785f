#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace k3lat {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Dense matrix of exact unbounded integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(std::vector<std::vector<Int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j);
    const Int& at(std::size_t i, std::size_t j) const;

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix& rhs) const = default;

    bool is_square() const { return rows_ == cols_; }
    bool is_symmetric() const;

    // Rows i of this matrix for i in [from, to).
    IntMatrix row_slice(std::size_t from, std::size_t to) const;
    std::vector<Int> row(std::size_t i) const;

    void swap_rows(std::size_t i, std::size_t j);
    void negate_row(std::size_t i);
    // row_i += c * row_j
    void add_row_multiple(std::size_t i, std::size_t j, const Int& c);
    void swap_cols(std::size_t i, std::size_t j);
    void negate_col(std::size_t i);
    // col_i += c * col_j
    void add_col_multiple(std::size_t i, std::size_t j, const Int& c);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

struct HnfResult {
    IntMatrix h;  // row-style Hermite normal form
    IntMatrix u;  // unimodular, u * m = h
};

// Row-style HNF: pivots positive, entries above each pivot reduced into
// [0, pivot). Zero rows sink to the bottom.
HnfResult hermite_normal_form(const IntMatrix& m);

struct SnfResult {
    IntMatrix d;      // diagonal, d_1 | d_2 | ..., entries >= 0
    IntMatrix u;      // unimodular, u * m * v = d
    IntMatrix v;
    IntMatrix u_inv;  // exact inverses, maintained alongside
    IntMatrix v_inv;
};

SnfResult smith_normal_form(const IntMatrix& m);

// Exact determinant (Bareiss fraction-free elimination). Requires square.
Int det(const IntMatrix& m);

// Basis (as rows) of {x : x * m = 0} over the integers. The kernel of an
// integer matrix is saturated, so the rows extend to a basis of Z^rows(m).
IntMatrix kernel_basis(const IntMatrix& m);

// Basis of the smallest primitive subgroup of Z^cols containing the row
// span: quotient of Z^cols by the result is torsion-free.
IntMatrix saturate(const IntMatrix& span_rows);

// Rank over Q.
std::size_t rank(const IntMatrix& m);

}  // namespace k3lat

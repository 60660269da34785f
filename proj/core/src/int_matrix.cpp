#include "k3lat/int_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace k3lat {

IntMatrix::IntMatrix(
    std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw std::invalid_argument("ragged initializer");
        for (long long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(std::vector<std::vector<Int>> rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_)
            throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < m.cols_; ++j)
            m.at(i, j) = std::move(rows[i][j]);
    }
    return m;
}

Int& IntMatrix::at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_)
        throw std::out_of_range("IntMatrix::at");
    return data_[i * cols_ + j];
}

const Int& IntMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_)
        throw std::out_of_range("IntMatrix::at");
    return data_[i * cols_ + j];
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("dimension mismatch in product");
    IntMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                p.at(i, j) += a * rhs.at(k, j);
        }
    return p;
}

bool IntMatrix::is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

IntMatrix IntMatrix::row_slice(std::size_t from, std::size_t to) const {
    if (from > to || to > rows_)
        throw std::out_of_range("IntMatrix::row_slice");
    IntMatrix s(to - from, cols_);
    for (std::size_t i = from; i < to; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            s.at(i - from, j) = at(i, j);
    return s;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
    std::vector<Int> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c)
        std::swap(at(i, c), at(j, c));
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) at(i, c) = -at(i, c);
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Int& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r)
        std::swap(at(r, i), at(r, j));
}

void IntMatrix::negate_col(std::size_t i) {
    for (std::size_t r = 0; r < rows_; ++r) at(r, i) = -at(r, i);
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Int& c) {
    if (c == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) at(r, i) += c * at(r, j);
}

namespace {

// Floor division quotient for exact integers.
Int fdiv(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// g = gcd(a, b) >= 0 with s*a + u*b = g (iterative extended Euclid).
Int egcd(const Int& a, const Int& b, Int& s, Int& u) {
    Int r0 = a, r1 = b, s0 = 1, s1 = 0;
    while (r1 != 0) {
        Int q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
    }
    s = s0;
    u = b == 0 ? Int(0) : Int((r0 - s0 * a) / b);
    return r0;
}

// rows (i1, i2) := (a11*row_i1 + a12*row_i2, a21*row_i1 + a22*row_i2)
void mix_rows(IntMatrix& m, std::size_t i1, std::size_t i2, const Int& a11,
              const Int& a12, const Int& a21, const Int& a22) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
        Int x = m.at(i1, k), y = m.at(i2, k);
        m.at(i1, k) = a11 * x + a12 * y;
        m.at(i2, k) = a21 * x + a22 * y;
    }
}

// cols (j1, j2) := (a11*col_j1 + a12*col_j2, a21*col_j1 + a22*col_j2)
void mix_cols(IntMatrix& m, std::size_t j1, std::size_t j2, const Int& a11,
              const Int& a12, const Int& a21, const Int& a22) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
        Int x = m.at(k, j1), y = m.at(k, j2);
        m.at(k, j1) = a11 * x + a12 * y;
        m.at(k, j2) = a21 * x + a22 * y;
    }
}

}  // namespace

HnfResult hermite_normal_form(const IntMatrix& m) {
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    const std::size_t nr = h.rows(), nc = h.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < nr; ++c) {
        std::size_t p = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (h.at(i, c) != 0) {
                p = i;
                break;
            }
        if (p == nr) continue;  // column is zero from row r down
        if (p != r) {
            h.swap_rows(r, p);
            u.swap_rows(r, p);
        }
        // One Bezout transform per entry folds the column into the pivot
        // (single pass, no quotient chains, so entries stay moderate).
        for (std::size_t i = r + 1; i < nr; ++i) {
            const Int a = h.at(r, c), b = h.at(i, c);
            if (b == 0) continue;
            if (b % a == 0) {
                Int q = -(b / a);
                h.add_row_multiple(i, r, q);
                u.add_row_multiple(i, r, q);
            } else {
                Int s, t;
                Int g = egcd(a, b, s, t);
                mix_rows(h, r, i, s, t, -(b / g), a / g);
                mix_rows(u, r, i, s, t, -(b / g), a / g);
            }
        }
        if (h.at(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q = fdiv(h.at(i, c), h.at(r, c));
            h.add_row_multiple(i, r, -q);
            u.add_row_multiple(i, r, -q);
        }
        ++r;
    }
    return {std::move(h), std::move(u)};
}

SnfResult smith_normal_form(const IntMatrix& m) {
    SnfResult res{m, IntMatrix::identity(m.rows()),
                  IntMatrix::identity(m.cols()),
                  IntMatrix::identity(m.rows()),
                  IntMatrix::identity(m.cols())};
    IntMatrix& d = res.d;
    const std::size_t nr = d.rows(), nc = d.cols();

    // Elementary operations applied to d with the corresponding update of
    // the transforms and their exact inverses:
    //   row op E on d  =>  u := E u,   u_inv := u_inv E^{-1}
    //   col op F on d  =>  v := v F,   v_inv := F^{-1} v_inv
    auto row_swap = [&](std::size_t i, std::size_t j) {
        d.swap_rows(i, j);
        res.u.swap_rows(i, j);
        res.u_inv.swap_cols(i, j);
    };
    auto row_add = [&](std::size_t i, std::size_t j, const Int& c) {
        d.add_row_multiple(i, j, c);
        res.u.add_row_multiple(i, j, c);
        res.u_inv.add_col_multiple(j, i, -c);
    };
    auto row_neg = [&](std::size_t i) {
        d.negate_row(i);
        res.u.negate_row(i);
        res.u_inv.negate_col(i);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        d.swap_cols(i, j);
        res.v.swap_cols(i, j);
        res.v_inv.swap_rows(i, j);
    };
    auto col_add = [&](std::size_t i, std::size_t j, const Int& c) {
        d.add_col_multiple(i, j, c);
        res.v.add_col_multiple(i, j, c);
        res.v_inv.add_row_multiple(j, i, -c);
    };
    // One Bezout transform folds d(i,t) into the pivot: rows (t,i) are
    // mixed by E = [[s,u],[-b/g,a/g]] with det 1, giving d(t,t) = g and
    // d(i,t) = 0; the inverse block updates u_inv columnwise.
    auto row_fold = [&](std::size_t t, std::size_t i) {
        const Int a = d.at(t, t), b = d.at(i, t);
        if (b == 0) return;
        if (b % a == 0) {
            row_add(i, t, -(b / a));
            return;
        }
        Int s, u;
        Int g = egcd(a, b, s, u);
        Int ag = a / g, bg = b / g;
        mix_rows(d, t, i, s, u, -bg, ag);
        mix_rows(res.u, t, i, s, u, -bg, ag);
        mix_cols(res.u_inv, t, i, ag, bg, -u, s);
    };
    auto col_fold = [&](std::size_t t, std::size_t j) {
        const Int a = d.at(t, t), b = d.at(t, j);
        if (b == 0) return;
        if (b % a == 0) {
            col_add(j, t, -(b / a));
            return;
        }
        Int s, u;
        Int g = egcd(a, b, s, u);
        Int ag = a / g, bg = b / g;
        mix_cols(d, t, j, s, u, -bg, ag);
        mix_cols(res.v, t, j, s, u, -bg, ag);
        mix_rows(res.v_inv, t, j, ag, bg, -u, s);
    };

    const std::size_t n = std::min(nr, nc);

    // Clear row and column t against a pivot at (t, t); returns false when
    // the trailing block is entirely zero. A column pass can dirty row t
    // and vice versa, but only through folds that strictly shrink the
    // pivot, so the alternation terminates.
    auto clear_at = [&](std::size_t t) -> bool {
        if (d.at(t, t) == 0) {
            std::size_t pi = nr, pj = nc;
            for (std::size_t i = t; i < nr && pi == nr; ++i)
                for (std::size_t j = t; j < nc; ++j)
                    if (d.at(i, j) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == nr) return false;
            row_swap(t, pi);
            col_swap(t, pj);
        }
        for (;;) {
            for (std::size_t i = t + 1; i < nr; ++i) row_fold(t, i);
            bool row_clean = true;
            for (std::size_t j = t + 1; j < nc && row_clean; ++j)
                row_clean = d.at(t, j) == 0;
            if (row_clean) break;
            for (std::size_t j = t + 1; j < nc; ++j) col_fold(t, j);
            bool col_clean = true;
            for (std::size_t i = t + 1; i < nr && col_clean; ++i)
                col_clean = d.at(i, t) == 0;
            if (col_clean) break;
        }
        if (d.at(t, t) < 0) row_neg(t);
        return true;
    };

    std::size_t rank = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!clear_at(t)) break;
        ++rank;
    }

    // Divisibility chain: fold a failing successor into position t via a
    // column merge and re-clear; d(t,t) becomes the gcd, the companion the
    // (signed) lcm, and the diagonal product is preserved.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t t = 0; t + 1 < rank; ++t) {
            if (d.at(t + 1, t + 1) % d.at(t, t) == 0) continue;
            col_add(t, t + 1, Int(1));
            clear_at(t);
            clear_at(t + 1);
            changed = true;
        }
    }
    return res;
}

Int det(const IntMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("det requires a square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(k, k) * a.at(i, j) -
                              a.at(i, k) * a.at(k, j)) /
                             prev;
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

IntMatrix kernel_basis(const IntMatrix& m) {
    // x * m = 0  <=>  (x u^{-1}) d = 0 where u m v = d; solutions are
    // spanned by the rows of u whose diagonal entry in d is zero.
    SnfResult s = smith_normal_form(m);
    std::size_t r = 0;
    const std::size_t n = std::min(s.d.rows(), s.d.cols());
    while (r < n && s.d.at(r, r) != 0) ++r;
    // Reduce to the canonical (Hermite) basis of the kernel; the raw rows
    // of u can carry large entries from the transform bookkeeping.
    return hermite_normal_form(s.u.row_slice(r, m.rows())).h;
}

IntMatrix saturate(const IntMatrix& span_rows) {
    if (span_rows.rows() == 0)
        return IntMatrix(0, span_rows.cols());
    // With u m v = d of rank r, the rational row space of m is spanned by
    // the first r rows of v^{-1}, which are primitive as part of a
    // unimodular matrix.
    SnfResult s = smith_normal_form(span_rows);
    std::size_t r = 0;
    const std::size_t n = std::min(s.d.rows(), s.d.cols());
    while (r < n && s.d.at(r, r) != 0) ++r;
    return hermite_normal_form(s.v_inv.row_slice(0, r)).h;
}

std::size_t rank(const IntMatrix& m) {
    SnfResult s = smith_normal_form(m);
    std::size_t r = 0;
    const std::size_t n = std::min(s.d.rows(), s.d.cols());
    while (r < n && s.d.at(r, r) != 0) ++r;
    return r;
}

}  // namespace k3lat

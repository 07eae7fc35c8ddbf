#include "nilspec/intmatrix.hpp"

#include <algorithm>
#include <tuple>

namespace nilspec {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return IntMatrix();
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_)
            throw DomainError("IntMatrix::from_rows: ragged row lengths");
        for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols, std::size_t dim) {
    IntMatrix m(dim, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != dim)
            throw DomainError("IntMatrix::from_columns: vector dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

IntVec IntMatrix::row(std::size_t i) const {
    IntVec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

IntVec IntMatrix::column(std::size_t j) const {
    IntVec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw DomainError("IntMatrix: product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DomainError("IntMatrix: sum shape mismatch");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw DomainError("IntMatrix: difference shape mismatch");
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

IntVec IntMatrix::apply(const IntVec& v) const {
    if (v.size() != cols_) throw DomainError("IntMatrix: apply dimension mismatch");
    IntVec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool IntMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMatrix one_minus(const IntMatrix& m) {
    if (!m.is_square()) throw DomainError("one_minus: matrix must be square");
    return IntMatrix::identity(m.rows()) - m;
}

Int det(const IntMatrix& m) {
    if (!m.is_square()) throw DomainError("det: matrix must be square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t piv = k;
            while (piv < n && a.at(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

struct SnfWork {
    IntMatrix d, u, v;

    // row_i -= q * row_t, mirrored on U
    void row_op(std::size_t i, std::size_t t, const Int& q) {
        for (std::size_t j = 0; j < d.cols(); ++j) d.at(i, j) -= q * d.at(t, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(t, j);
    }
    void col_op(std::size_t j, std::size_t t, const Int& q) {
        for (std::size_t i = 0; i < d.rows(); ++i) d.at(i, j) -= q * d.at(i, t);
        for (std::size_t i = 0; i < v.rows(); ++i) v.at(i, j) -= q * v.at(i, t);
    }
    void row_swap(std::size_t i, std::size_t t) {
        for (std::size_t j = 0; j < d.cols(); ++j) std::swap(d.at(i, j), d.at(t, j));
        for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u.at(i, j), u.at(t, j));
    }
    void col_swap(std::size_t j, std::size_t t) {
        for (std::size_t i = 0; i < d.rows(); ++i) std::swap(d.at(i, j), d.at(i, t));
        for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v.at(i, j), v.at(i, t));
    }
    void row_negate(std::size_t i) {
        for (std::size_t j = 0; j < d.cols(); ++j) d.at(i, j) = -d.at(i, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u.at(i, j) = -u.at(i, j);
    }
    void row_add(std::size_t dst, std::size_t src) {
        for (std::size_t j = 0; j < d.cols(); ++j) d.at(dst, j) += d.at(src, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u.at(dst, j) += u.at(src, j);
    }
};

} // namespace

SnfResult smith_normal_form(const IntMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    SnfWork w{m, IntMatrix::identity(rows), IntMatrix::identity(cols)};
    const std::size_t steps = std::min(rows, cols);

    for (std::size_t t = 0; t < steps; ++t) {
        // pivot: smallest nonzero absolute value, ties broken row-major
        std::size_t pi = rows, pj = cols;
        Int best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                const Int& x = w.d.at(i, j);
                if (x == 0) continue;
                Int ax = abs(x);
                if (pi == rows || ax < best) {
                    best = ax;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == rows) break; // remaining submatrix is zero

        if (pi != t) w.row_swap(pi, t);
        if (pj != t) w.col_swap(pj, t);
        if (w.d.at(t, t) < 0) w.row_negate(t);

        for (;;) {
            bool restart = false;
            for (std::size_t i = t + 1; i < rows && !restart; ++i) {
                if (w.d.at(i, t) == 0) continue;
                Int q = floor_div(w.d.at(i, t), w.d.at(t, t));
                w.row_op(i, t, q);
                if (w.d.at(i, t) != 0) { // remainder became the smaller pivot
                    w.row_swap(i, t);
                    restart = true;
                }
            }
            if (restart) continue;
            for (std::size_t j = t + 1; j < cols && !restart; ++j) {
                if (w.d.at(t, j) == 0) continue;
                Int q = floor_div(w.d.at(t, j), w.d.at(t, t));
                w.col_op(j, t, q);
                if (w.d.at(t, j) != 0) {
                    w.col_swap(j, t);
                    restart = true;
                }
            }
            if (restart) continue;

            // enforce d_t | d_i for every later entry before moving on
            std::size_t bi = rows;
            for (std::size_t i = t + 1; i < rows && bi == rows; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (w.d.at(i, j) % w.d.at(t, t) != 0) {
                        bi = i;
                        break;
                    }
            if (bi == rows) break;
            w.row_add(t, bi);
        }
    }
    return SnfResult{std::move(w.u), std::move(w.d), std::move(w.v)};
}

IntVec snf_diagonal(const SnfResult& s) {
    const std::size_t k = std::min(s.D.rows(), s.D.cols());
    IntVec d(k);
    for (std::size_t i = 0; i < k; ++i) d[i] = s.D.at(i, i);
    return d;
}

ExtNat cokernel_order(const IntMatrix& m) {
    if (!m.is_square()) throw DomainError("cokernel_order: matrix must be square");
    if (m.rows() == 0) return ExtNat::finite(1);
    SnfResult s = smith_normal_form(m);
    Int order = 1;
    for (const Int& d : snf_diagonal(s)) {
        if (d == 0) return ExtNat::infinity();
        order *= d;
    }
    return ExtNat::finite(order);
}

std::vector<IntVec> kernel_basis(const IntMatrix& m) {
    SnfResult s = smith_normal_form(m);
    const std::size_t r = std::min(m.rows(), m.cols());
    std::vector<IntVec> basis;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (j >= r || s.D.at(j, j) == 0) basis.push_back(s.V.column(j));
    return basis;
}

std::vector<IntVec> saturation(const std::vector<IntVec>& basis) {
    if (basis.empty()) return {};
    const std::size_t dim = basis[0].size();
    for (const IntVec& v : basis)
        if (v.size() != dim) throw DomainError("saturation: vector dimension mismatch");
    SnfResult s = smith_normal_form(IntMatrix::from_rows(basis));
    IntMatrix v_inv = integer_inverse(s.V);
    std::vector<IntVec> result;
    for (std::size_t i = 0; i < std::min(basis.size(), dim); ++i)
        if (s.D.at(i, i) != 0) result.push_back(v_inv.row(i));
    return result;
}

std::vector<IntVec> lattice_basis(const std::vector<IntVec>& spanning) {
    if (spanning.empty()) return {};
    const std::size_t dim = spanning[0].size();
    SnfResult s = smith_normal_form(IntMatrix::from_rows(spanning));
    IntMatrix v_inv = integer_inverse(s.V);
    std::vector<IntVec> result;
    for (std::size_t i = 0; i < std::min(spanning.size(), dim); ++i) {
        const Int& d = s.D.at(i, i);
        if (d == 0) continue;
        IntVec row = v_inv.row(i);
        for (Int& x : row) x *= d;
        result.push_back(std::move(row));
    }
    return result;
}

IntMatrix integer_inverse(const IntMatrix& m) {
    if (!m.is_square()) throw DomainError("integer_inverse: matrix must be square");
    SnfResult s = smith_normal_form(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (s.D.at(i, i) != 1)
            throw DomainError("integer_inverse: matrix is not unimodular");
    // U M V = I  =>  M^-1 = V U
    return s.V * s.U;
}

std::optional<IntVec> solve(const IntMatrix& m, const IntVec& b) {
    if (b.size() != m.rows()) throw DomainError("solve: dimension mismatch");
    SnfResult s = smith_normal_form(m);
    IntVec c = s.U.apply(b);
    const std::size_t r = std::min(m.rows(), m.cols());
    IntVec w(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const Int d = i < r ? s.D.at(i, i) : Int(0);
        if (d == 0) {
            if (c[i] != 0) return std::nullopt;
        } else {
            if (c[i] % d != 0) return std::nullopt;
            w[i] = c[i] / d;
        }
    }
    return s.V.apply(w);
}

bool in_lattice(const std::vector<IntVec>& basis, const IntVec& v) {
    const std::size_t dim = v.size();
    return solve(IntMatrix::from_columns(basis, dim), v).has_value();
}

QuotientChart::QuotientChart(std::size_t ambient, const std::vector<IntVec>& sub_basis)
    : ambient_(ambient), sub_rank_(sub_basis.size()) {
    IntMatrix b = IntMatrix::from_columns(sub_basis, ambient);
    SnfResult s = smith_normal_form(b);
    for (std::size_t i = 0; i < sub_rank_; ++i)
        if (s.D.at(i, i) != 1)
            throw DomainError("QuotientChart: sublattice basis is not saturated");
    p_inv_ = s.U;
    p_ = integer_inverse(s.U);
}

IntVec QuotientChart::project(const IntVec& v) const {
    IntVec c = p_inv_.apply(v);
    return IntVec(c.begin() + static_cast<std::ptrdiff_t>(sub_rank_), c.end());
}

std::optional<IntVec> QuotientChart::sub_coordinates(const IntVec& v) const {
    IntVec c = p_inv_.apply(v);
    for (std::size_t i = sub_rank_; i < ambient_; ++i)
        if (c[i] != 0) return std::nullopt;
    c.resize(sub_rank_);
    return c;
}

QuotientChart::Split QuotientChart::split(const IntMatrix& m) const {
    if (m.rows() != ambient_ || m.cols() != ambient_)
        throw DomainError("QuotientChart::split: matrix shape mismatch");
    IntMatrix conj = p_inv_ * m * p_;
    Split out{IntMatrix(sub_rank_, sub_rank_),
              IntMatrix(ambient_ - sub_rank_, ambient_ - sub_rank_), true};
    for (std::size_t i = sub_rank_; i < ambient_; ++i)
        for (std::size_t j = 0; j < sub_rank_; ++j)
            if (conj.at(i, j) != 0) out.invariant = false;
    for (std::size_t i = 0; i < sub_rank_; ++i)
        for (std::size_t j = 0; j < sub_rank_; ++j)
            out.on_sub.at(i, j) = conj.at(i, j);
    for (std::size_t i = sub_rank_; i < ambient_; ++i)
        for (std::size_t j = sub_rank_; j < ambient_; ++j)
            out.on_quotient.at(i - sub_rank_, j - sub_rank_) = conj.at(i, j);
    return out;
}

IntMatrix quotient_action(const IntMatrix& m, const std::vector<IntVec>& k) {
    if (!m.is_square()) throw DomainError("quotient_action: matrix must be square");
    QuotientChart chart(m.rows(), k);
    auto split = chart.split(m);
    if (!split.invariant)
        throw DomainError("quotient_action: matrix does not preserve the sublattice");
    return split.on_quotient;
}

} // namespace nilspec

#pragma once

#include "jet.hpp"
#include "linalg_q.hpp"

#include <vector>

namespace gwrec {

// Dense matrix with jet entries. All entries share (nvars, order).
class JetMatrix {
public:
    JetMatrix() : rows_(0), cols_(0) {}
    JetMatrix(int rows, int cols, int nvars, int order)
        : rows_(rows), cols_(cols),
          e_(static_cast<std::size_t>(rows) * cols, Jet::zero(nvars, order)) {}

    static JetMatrix identity(int n, int nvars, int order) {
        JetMatrix m(n, n, nvars, order);
        for (int i = 0; i < n; ++i) m.at(i, i) = Jet::constant(nvars, order, 1);
        return m;
    }

    static JetMatrix from_matq(const MatQ& q, int nvars, int order) {
        JetMatrix m(q.rows(), q.cols(), nvars, order);
        for (int i = 0; i < q.rows(); ++i)
            for (int j = 0; j < q.cols(); ++j)
                m.at(i, j) = Jet::constant(nvars, order, q.at(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return e_.empty() ? 0 : e_[0].nvars(); }
    int order() const { return e_.empty() ? 0 : e_[0].order(); }

    Jet& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Jet& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    MatQ constant_matrix() const {
        MatQ q(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) q.at(i, j) = at(i, j).constant_term();
        return q;
    }

    JetMatrix truncated(int new_order) const {
        JetMatrix m = *this;
        for (auto& x : m.e_) x = x.truncated(new_order);
        return m;
    }

    friend JetMatrix operator*(const JetMatrix& x, const JetMatrix& y) {
        if (x.cols_ != y.rows_)
            throw Error(ErrorKind::DimensionMismatch, "jet matrix product shape mismatch");
        JetMatrix r(x.rows_, y.cols_, x.nvars(), std::min(x.order(), y.order()));
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                if (x.at(i, k).is_zero()) continue;
                for (int j = 0; j < y.cols_; ++j) {
                    if (y.at(k, j).is_zero()) continue;
                    r.at(i, j) += x.at(i, k) * y.at(k, j);
                }
            }
        return r;
    }

    friend JetMatrix operator+(const JetMatrix& x, const JetMatrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw Error(ErrorKind::DimensionMismatch, "jet matrix sum shape mismatch");
        JetMatrix r = x;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += y.e_[i];
        return r;
    }

    friend JetMatrix operator-(const JetMatrix& x, const JetMatrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw Error(ErrorKind::DimensionMismatch, "jet matrix difference shape mismatch");
        JetMatrix r = x;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= y.e_[i];
        return r;
    }

    friend JetMatrix operator*(const Jet& s, const JetMatrix& x) {
        JetMatrix r = x;
        for (auto& v : r.e_) v = s * v;
        return r;
    }

    friend JetMatrix operator*(const Rational& s, const JetMatrix& x) {
        JetMatrix r = x;
        for (auto& v : r.e_) v = s * v;
        return r;
    }

    friend bool operator==(const JetMatrix& x, const JetMatrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) return false;
        for (std::size_t i = 0; i < x.e_.size(); ++i)
            if (x.e_[i] != y.e_[i]) return false;
        return true;
    }

    Jet trace() const {
        if (rows_ != cols_) throw Error(ErrorKind::DimensionMismatch, "trace of non-square matrix");
        Jet t = Jet::zero(nvars(), order());
        for (int i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

private:
    int rows_, cols_;
    std::vector<Jet> e_;
};

/* Solves M * Z = B over the jet ring by Gauss-Jordan elimination, pivoting
 * on rows whose pivot entry has a nonzero constant term; higher-order
 * coefficients are corrected through exact jet arithmetic. Requires the
 * constant-term matrix to be invertible. */
inline JetMatrix jetmat_solve(const JetMatrix& m0, const JetMatrix& b0) {
    if (m0.rows() != m0.cols() || b0.rows() != m0.rows())
        throw Error(ErrorKind::DimensionMismatch, "jetmat_solve shape mismatch");
    JetMatrix m = m0, x = b0;
    const int n = m.rows();
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (m.at(i, k).constant_term() != 0) { piv = i; break; }
        if (piv < 0)
            throw Error(ErrorKind::DegenerateFrame,
                        "degenerate frame: singular constant-term matrix in jetmat_solve");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x.at(piv, j), x.at(k, j));
        }
        Jet inv = m.at(k, k).inverse();
        for (int j = 0; j < n; ++j) m.at(k, j) = inv * m.at(k, j);
        for (int j = 0; j < x.cols(); ++j) x.at(k, j) = inv * x.at(k, j);
        for (int i = 0; i < n; ++i) {
            if (i == k || m.at(i, k).is_zero()) continue;
            Jet f = m.at(i, k);
            for (int j = 0; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
            for (int j = 0; j < x.cols(); ++j) x.at(i, j) -= f * x.at(k, j);
        }
    }
    return x;
}

/* Characteristic polynomial det(tI - M) by the Faddeev-LeVerrier scheme:
 * only ring operations plus division by the small integers 1..s. Returns
 * ascending coefficients c[0..s] with c[s] = 1. */
inline std::vector<Jet> charpoly(const JetMatrix& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorKind::DimensionMismatch, "charpoly of non-square matrix");
    const int s = m.rows();
    std::vector<Jet> c(s + 1, Jet::zero(m.nvars(), m.order()));
    c[s] = Jet::constant(m.nvars(), m.order(), 1);
    JetMatrix nk = JetMatrix::identity(s, m.nvars(), m.order());
    for (int k = 1; k <= s; ++k) {
        JetMatrix mk = m * nk;
        c[s - k] = Rational(-1, k) * mk.trace();
        if (k < s) {
            nk = mk;
            for (int i = 0; i < s; ++i) nk.at(i, i) += c[s - k];
        }
    }
    return c;
}

} // namespace gwrec

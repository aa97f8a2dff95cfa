#pragma once

#include "rational.hpp"

#include <vector>

namespace gwrec {

// Dense matrix over Q. Small sizes only; exact Gaussian elimination.
class MatQ {
public:
    MatQ() : rows_(0), cols_(0) {}
    MatQ(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

    static MatQ identity(int n) {
        MatQ m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    friend MatQ operator*(const MatQ& x, const MatQ& y) {
        if (x.cols_ != y.rows_)
            throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
        MatQ r(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                if (x.at(i, k) == 0) continue;
                for (int j = 0; j < y.cols_; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
            }
        return r;
    }

    friend MatQ operator+(const MatQ& x, const MatQ& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw Error(ErrorKind::DimensionMismatch, "matrix sum shape mismatch");
        MatQ r = x;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
        return r;
    }

    friend MatQ operator*(const Rational& s, const MatQ& x) {
        MatQ r = x;
        for (auto& v : r.a_) v *= s;
        return r;
    }

    friend bool operator==(const MatQ& x, const MatQ& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

    Rational det() const {
        if (rows_ != cols_) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
        MatQ m = *this;
        Rational d = 1;
        for (int k = 0; k < rows_; ++k) {
            int piv = -1;
            for (int i = k; i < rows_; ++i)
                if (m.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            if (piv != k) {
                for (int j = k; j < cols_; ++j) std::swap(m.at(piv, j), m.at(k, j));
                d = -d;
            }
            d *= m.at(k, k);
            Rational inv = Rational(1) / m.at(k, k);
            for (int i = k + 1; i < rows_; ++i) {
                if (m.at(i, k) == 0) continue;
                Rational f = m.at(i, k) * inv;
                for (int j = k; j < cols_; ++j) m.at(i, j) -= f * m.at(k, j);
            }
        }
        return d;
    }

    // Solves this * X = B for square invertible `this`.
    MatQ solve(const MatQ& b) const {
        if (rows_ != cols_ || b.rows_ != rows_)
            throw Error(ErrorKind::DimensionMismatch, "solve shape mismatch");
        MatQ m = *this, x = b;
        for (int k = 0; k < rows_; ++k) {
            int piv = -1;
            for (int i = k; i < rows_; ++i)
                if (m.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) throw Error(ErrorKind::ValidationError, "singular matrix in solve");
            if (piv != k) {
                for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(k, j));
                for (int j = 0; j < x.cols_; ++j) std::swap(x.at(piv, j), x.at(k, j));
            }
            Rational inv = Rational(1) / m.at(k, k);
            for (int j = 0; j < cols_; ++j) m.at(k, j) *= inv;
            for (int j = 0; j < x.cols_; ++j) x.at(k, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == k || m.at(i, k) == 0) continue;
                Rational f = m.at(i, k);
                for (int j = 0; j < cols_; ++j) m.at(i, j) -= f * m.at(k, j);
                for (int j = 0; j < x.cols_; ++j) x.at(i, j) -= f * x.at(k, j);
            }
        }
        return x;
    }

    MatQ inverse() const { return solve(identity(rows_)); }

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

/* Polynomials over Q, ascending coefficients. Used for constant-term
 * characteristic polynomials and frame validity tests. */
using PolyQ = std::vector<Rational>;

inline PolyQ polyq_derivative(const PolyQ& p) {
    PolyQ d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Rational(i) * p[i]);
    if (d.empty()) d.push_back(0);
    return d;
}

// Companion matrix of a monic polynomial (leading coefficient must be 1).
inline MatQ companion(const PolyQ& p) {
    int s = static_cast<int>(p.size()) - 1;
    if (s < 1 || p[s] != 1)
        throw Error(ErrorKind::ValidationError, "companion matrix needs a monic polynomial");
    MatQ c(s, s);
    for (int i = 1; i < s; ++i) c.at(i, i - 1) = 1;
    for (int i = 0; i < s; ++i) c.at(i, s - 1) = -p[i];
    return c;
}

inline MatQ polyq_eval_mat(const PolyQ& p, const MatQ& m) {
    int n = m.rows();
    MatQ r(n, n);
    for (std::size_t k = p.size(); k-- > 0;) {
        r = r * m;
        for (int i = 0; i < n; ++i) r.at(i, i) += p[k];
    }
    return r;
}

inline Rational polyq_eval(const PolyQ& p, const Rational& t) {
    Rational r = 0;
    for (std::size_t k = p.size(); k-- > 0;) r = r * t + p[k];
    return r;
}

// Res(f, g) for monic f: the product of g over the roots of f, computed as
// det g(C_f). No degree bookkeeping needed.
inline Rational resultant_monic(const PolyQ& f, const PolyQ& g) {
    return polyq_eval_mat(g, companion(f)).det();
}

// Discriminant of a monic polynomial: (-1)^{s(s-1)/2} Res(f, f').
inline Rational discriminant_monic(const PolyQ& f) {
    int s = static_cast<int>(f.size()) - 1;
    Rational r = resultant_monic(f, polyq_derivative(f));
    return ((s * (s - 1) / 2) % 2 == 0) ? r : -r;
}

} // namespace gwrec

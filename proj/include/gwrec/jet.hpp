#pragma once

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>
#include <vector>

namespace gwrec {

using MultiIndex = std::vector<int>;

inline int mi_degree(const MultiIndex& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

/* Dense monomial layout for truncated power series in `nvars` variables up
 * to total degree `order`. Exponents are listed degree by degree, so a
 * truncation to lower order is a prefix copy. Layouts are immutable and
 * shared through a registry. */
class JetLayout {
public:
    const int nvars;
    const int order;

    static std::shared_ptr<const JetLayout> get(int nvars, int order) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(nvars, order);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto layout = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
        cache.emplace(key, layout);
        return layout;
    }

    std::size_t size() const { return exps_.size(); }
    // number of monomials of total degree <= d
    std::size_t size_at_order(int d) const { return offsets_[d + 1]; }
    const MultiIndex& exponent(std::size_t pos) const { return exps_[pos]; }
    int degree(std::size_t pos) const { return degs_[pos]; }

    std::size_t rank(const MultiIndex& m) const {
        int d = mi_degree(m);
        std::size_t r = offsets_[d];
        int rem = d;
        for (int v = 0; v + 1 < nvars; ++v) {
            int k = nvars - 1 - v; // variables to the right
            r += cum_[k][rem] - cum_[k][rem - m[v]];
            rem -= m[v];
        }
        return r;
    }

private:
    JetLayout(int nv, int ord) : nvars(nv), order(ord) {
        offsets_.assign(ord + 2, 0);
        if (nv == 0) {
            exps_.push_back(MultiIndex{});
            for (int d = 1; d <= ord + 1; ++d) offsets_[d] = 1;
        } else {
            MultiIndex cur(nv, 0);
            for (int d = 0; d <= ord; ++d) {
                offsets_[d] = exps_.size();
                emit_(cur, 0, d);
            }
            offsets_[ord + 1] = exps_.size();
        }
        degs_.reserve(exps_.size());
        for (const auto& e : exps_) degs_.push_back(mi_degree(e));
        // cum_[k][t] = C(t+k, k) = #monomials of degree <= t in k variables
        cum_.assign(nv + 1, std::vector<std::size_t>(ord + 1, 1));
        for (int k = 1; k <= nv; ++k)
            for (int t = 1; t <= ord; ++t)
                cum_[k][t] = cum_[k][t - 1] * (t + k) / t; // C(t+k,k) = C(t-1+k,k)*(t+k)/t
    }

    void emit_(MultiIndex& cur, int v, int rem) {
        if (v == nvars - 1) {
            cur[v] = rem;
            exps_.push_back(cur);
            cur[v] = 0;
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            cur[v] = e;
            emit_(cur, v + 1, rem - e);
        }
        cur[v] = 0;
    }

    std::vector<MultiIndex> exps_;
    std::vector<int> degs_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::size_t>> cum_;
};

/* Truncated multivariate power series (a "jet") over Q. Coefficients are
 * stored densely in layout order. Mixed-order arithmetic truncates to the
 * smaller order; mixed variable counts are an error. Equality compares up
 * to the common order. */
class Jet {
public:
    Jet() : layout_(JetLayout::get(0, 0)), c_(1) {}

    static Jet zero(int nvars, int order) { return Jet(JetLayout::get(nvars, order)); }

    static Jet constant(int nvars, int order, Rational v) {
        Jet j(JetLayout::get(nvars, order));
        j.c_[0] = std::move(v);
        return j;
    }

    // t_{var} (0-based); vanishes when order == 0
    static Jet variable(int nvars, int order, int var) {
        check_var_(nvars, var);
        Jet j(JetLayout::get(nvars, order));
        if (order >= 1) {
            MultiIndex m(nvars, 0);
            m[var] = 1;
            j.c_[j.layout_->rank(m)] = 1;
        }
        return j;
    }

    // sum_{m <= order} t_var^m / m!
    static Jet exp_direction(int nvars, int order, int var) {
        check_var_(nvars, var);
        Jet j(JetLayout::get(nvars, order));
        MultiIndex m(nvars, 0);
        Rational f = 1;
        for (int d = 0; d <= order; ++d) {
            m[var] = d;
            if (d > 0) f /= d;
            j.c_[j.layout_->rank(m)] = f;
        }
        return j;
    }

    int nvars() const { return layout_->nvars; }
    int order() const { return layout_->order; }
    std::size_t size() const { return c_.size(); }
    const JetLayout& layout() const { return *layout_; }

    const Rational& operator[](std::size_t pos) const { return c_[pos]; }
    Rational& operator[](std::size_t pos) { return c_[pos]; }

    const Rational& coeff(const MultiIndex& m) const {
        check_index_(m);
        return c_[layout_->rank(m)];
    }
    void set_coeff(const MultiIndex& m, Rational v) {
        check_index_(m);
        c_[layout_->rank(m)] = std::move(v);
    }

    const Rational& constant_term() const { return c_[0]; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    Jet truncated(int new_order) const {
        if (new_order >= order()) return *this;
        Jet r(JetLayout::get(nvars(), new_order));
        std::copy(c_.begin(), c_.begin() + r.c_.size(), r.c_.begin());
        return r;
    }

    Jet extended(int new_order) const {
        if (new_order <= order()) return truncated(new_order);
        Jet r(JetLayout::get(nvars(), new_order));
        std::copy(c_.begin(), c_.end(), r.c_.begin());
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        int d = common_order_(a, b);
        Jet r = a.truncated(d);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b) {
        int d = common_order_(a, b);
        Jet r = a.truncated(d);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        int d = common_order_(a, b);
        Jet r(JetLayout::get(a.nvars(), d));
        const JetLayout& L = *r.layout_;
        const std::size_t na = L.size();
        MultiIndex s(L.nvars);
        for (std::size_t i = 0; i < na; ++i) {
            if (a.c_[i] == 0) continue;
            const int di = L.degree(i);
            const MultiIndex& ei = L.exponent(i);
            const std::size_t jmax = L.size_at_order(d - di);
            for (std::size_t j = 0; j < jmax; ++j) {
                if (b.c_[j] == 0) continue;
                const MultiIndex& ej = L.exponent(j);
                for (int v = 0; v < L.nvars; ++v) s[v] = ei[v] + ej[v];
                r.c_[L.rank(s)] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }

    friend Jet operator*(const Rational& s, const Jet& a) {
        Jet r = a;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    friend Jet operator*(const Jet& a, const Rational& s) { return s * a; }

    Jet& operator+=(const Jet& b) { return *this = *this + b; }
    Jet& operator-=(const Jet& b) { return *this = *this - b; }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }

    // multiplicative inverse; requires a unit constant term
    Jet inverse() const {
        if (c_[0] == 0)
            throw Error(ErrorKind::NonInvertibleJet,
                        "non-invertible jet: zero constant term (degenerate base point)");
        const JetLayout& L = *layout_;
        Jet r(layout_);
        const Rational inv0 = Rational(1) / c_[0];
        r.c_[0] = inv0;
        MultiIndex rest(L.nvars);
        for (std::size_t p = 1; p < c_.size(); ++p) {
            const MultiIndex& m = L.exponent(p);
            const int dp = L.degree(p);
            Rational acc = 0;
            for (std::size_t q = 1; q < c_.size() && L.degree(q) <= dp; ++q) {
                if (c_[q] == 0) continue;
                const MultiIndex& k = L.exponent(q);
                bool ok = true;
                for (int v = 0; v < L.nvars; ++v) {
                    rest[v] = m[v] - k[v];
                    if (rest[v] < 0) { ok = false; break; }
                }
                if (!ok) continue;
                acc += c_[q] * r.c_[L.rank(rest)];
            }
            r.c_[p] = -inv0 * acc;
        }
        return r;
    }

    friend bool operator==(const Jet& a, const Jet& b) {
        if (a.nvars() != b.nvars()) return false;
        int d = std::min(a.order(), b.order());
        std::size_t n = a.layout_->size_at_order(d);
        for (std::size_t i = 0; i < n; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }
    friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << c_[i].str();
            const MultiIndex& e = layout_->exponent(i);
            for (int v = 0; v < nvars(); ++v) {
                if (e[v] == 0) continue;
                os << "*t" << (v + 1);
                if (e[v] > 1) os << "^" << e[v];
            }
        }
        if (first) os << "0";
        return os.str();
    }

private:
    explicit Jet(std::shared_ptr<const JetLayout> layout)
        : layout_(std::move(layout)), c_(layout_->size()) {}

    static void check_var_(int nvars, int var) {
        if (var < 0 || var >= nvars)
            throw Error(ErrorKind::DimensionMismatch, "jet variable index out of range");
    }

    void check_index_(const MultiIndex& m) const {
        if (static_cast<int>(m.size()) != nvars())
            throw Error(ErrorKind::DimensionMismatch, "multi-index arity mismatch");
        for (int e : m)
            if (e < 0) throw Error(ErrorKind::DimensionMismatch, "negative multi-index entry");
        if (mi_degree(m) > order())
            throw Error(ErrorKind::DimensionMismatch, "multi-index degree exceeds jet order");
    }

    static int common_order_(const Jet& a, const Jet& b) {
        if (a.nvars() != b.nvars())
            throw Error(ErrorKind::DimensionMismatch, "jet variable count mismatch");
        return std::min(a.order(), b.order());
    }

    std::shared_ptr<const JetLayout> layout_;
    std::vector<Rational> c_;
};

inline Jet jet_inv(const Jet& a) { return a.inverse(); }

} // namespace gwrec

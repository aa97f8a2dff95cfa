#pragma once

#include "fano_model.hpp"
#include "jet_matrix.hpp"

#include <array>
#include <cstdlib>
#include <map>
#include <optional>
#include <thread>
#include <vector>

namespace gwrec {

// Symmetric matrix of jets indexed by coordinate directions (0-based slot
// i stands for direction i+1).
class SymJet {
public:
    SymJet() : s_(0) {}
    SymJet(int s, int nvars, int order)
        : s_(s), v_(static_cast<std::size_t>(s) * (s + 1) / 2, Jet::zero(nvars, order)) {}

    int size() const { return s_; }
    Jet& at(int i, int j) { return v_[idx_(i, j)]; }
    const Jet& at(int i, int j) const { return v_[idx_(i, j)]; }

    bool is_zero() const {
        for (const auto& x : v_)
            if (!x.is_zero()) return false;
        return true;
    }

    SymJet truncated(int order) const {
        SymJet out = *this;
        for (auto& x : out.v_) x = x.truncated(order);
        return out;
    }

    friend bool operator==(const SymJet& a, const SymJet& b) {
        return a.s_ == b.s_ && a.v_ == b.v_;
    }

private:
    std::size_t idx_(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i) * s_ - static_cast<std::size_t>(i) * (i - 1) / 2 +
               (j - i);
    }
    int s_;
    std::vector<Jet> v_;
};

// Fully symmetric rank-3 tensor of jets, canonical storage on sorted triples.
class SymTensor3 {
public:
    SymTensor3() : s_(0) {}
    SymTensor3(int s, int nvars, int order) : s_(s) {
        lut_.assign(static_cast<std::size_t>(s) * s * s, 0);
        std::size_t pos = 0;
        for (int i = 0; i < s; ++i)
            for (int j = i; j < s; ++j)
                for (int k = j; k < s; ++k) {
                    int idx[3] = {i, j, k};
                    std::sort(idx, idx + 3);
                    do {
                        lut_[(static_cast<std::size_t>(idx[0]) * s + idx[1]) * s + idx[2]] = pos;
                    } while (std::next_permutation(idx, idx + 3));
                    ++pos;
                }
        v_.assign(pos, Jet::zero(nvars, order));
    }

    int size() const { return s_; }
    Jet& at(int i, int j, int k) { return v_[lut_[(static_cast<std::size_t>(i) * s_ + j) * s_ + k]]; }
    const Jet& at(int i, int j, int k) const {
        return v_[lut_[(static_cast<std::size_t>(i) * s_ + j) * s_ + k]];
    }

private:
    int s_;
    std::vector<std::size_t> lut_;
    std::vector<Jet> v_;
};

// Dense rank-4 tensor of jets (used for the associativity residual).
class Tensor4 {
public:
    Tensor4(int s, int nvars, int order)
        : s_(s), v_(static_cast<std::size_t>(s) * s * s * s, Jet::zero(nvars, order)) {}
    int size() const { return s_; }
    Jet& at(int a, int b, int c, int d) {
        return v_[((static_cast<std::size_t>(a) * s_ + b) * s_ + c) * s_ + d];
    }
    const Jet& at(int a, int b, int c, int d) const {
        return v_[((static_cast<std::size_t>(a) * s_ + b) * s_ + c) * s_ + d];
    }
    bool is_zero() const {
        for (const auto& x : v_)
            if (!x.is_zero()) return false;
        return true;
    }

private:
    int s_;
    std::vector<Jet> v_;
};

namespace detail {

inline int thread_budget() {
    const char* env = std::getenv("GWREC_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    if (v > 64) return 64;
    return v;
}

// Runs fn(i) for i in [0, n). Results must go to disjoint slots; the
// partition is deterministic so output never depends on the thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    int budget = thread_budget();
    if (budget <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nthreads = std::min<std::size_t>(budget, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += nthreads) fn(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

/* Polynomials in an auxiliary variable t with jet coefficients, ascending
 * degree. t is the spectral parameter of the minor frames and is never
 * truncated. */
using PolyJet = std::vector<Jet>;

inline PolyJet pj_mul(const PolyJet& a, const PolyJet& b) {
    PolyJet r(a.size() + b.size() - 1, Jet::zero(a[0].nvars(), a[0].order()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

inline void pj_axpy(PolyJet& acc, const Rational& w, const PolyJet& x) {
    if (acc.size() < x.size()) acc.resize(x.size(), Jet::zero(x[0].nvars(), x[0].order()));
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += w * x[i];
}

inline PolyQ pj_constant_terms(const PolyJet& p) {
    PolyQ q;
    for (const auto& j : p) q.push_back(j.constant_term());
    return q;
}

} // namespace detail

/* The full second-derivative matrix: classical cubic contributions from the
 * triple intersections (with x_0 = 0) plus the quantum part y on the
 * direction block. Symmetric (sigma+1) x (sigma+1). */
using BigY = JetMatrix;

inline BigY assemble_bigY(const FanoModel& m, const std::vector<Jet>& x, const SymJet& y) {
    if (!m.validated) throw Error(ErrorKind::ValidationError, "model not validated");
    if (static_cast<int>(x.size()) != m.sigma || y.size() != m.sigma)
        throw Error(ErrorKind::DimensionMismatch, "assemble_bigY: coordinate arity mismatch");
    const int nv = x[0].nvars(), ord = x[0].order();
    BigY Y(m.sigma + 1, m.sigma + 1, nv, ord);
    for (int a = 0; a <= m.sigma; ++a)
        for (int b = a; b <= m.sigma; ++b) {
            Jet e = Jet::zero(nv, ord);
            for (int c = 1; c <= m.sigma; ++c) {
                long long g = m.g3_at(a, b, c);
                if (g != 0) e += Rational(g) * x[c - 1];
            }
            if (a >= 1 && b >= 1) e += y.at(a - 1, b - 1);
            Y.at(a, b) = e;
            if (a != b) Y.at(b, a) = Y.at(a, b);
        }
    return Y;
}

/* Euler pairing matrix B_{ab} = c_{ab} + (1-n+p_a+p_b) Y_{ab} and the
 * multiplication-by-Euler-field operator A = B gbar whose spectrum consists
 * of the canonical coordinates. */
struct EulerMatrix {
    JetMatrix B;
    JetMatrix A;
    std::vector<int> K; // weights 1-n+p_a+p_b, dense (sigma+1)^2
};

inline EulerMatrix euler_matrix(const FanoModel& m, const BigY& Y) {
    const int s = m.sigma + 1;
    if (Y.rows() != s || Y.cols() != s)
        throw Error(ErrorKind::DimensionMismatch, "euler_matrix: BigY shape mismatch");
    EulerMatrix em;
    em.K.resize(static_cast<std::size_t>(s) * s);
    em.B = JetMatrix(s, s, Y.nvars(), Y.order());
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            int k = m.k_weight(a, b);
            em.K[static_cast<std::size_t>(a) * s + b] = k;
            em.B.at(a, b) = Jet::constant(Y.nvars(), Y.order(), m.c2_at(a, b)) +
                            Rational(k) * Y.at(a, b);
        }
    em.A = JetMatrix(s, s, Y.nvars(), Y.order());
    for (int a = 0; a < s; ++a)
        for (int g = 0; g < s; ++g) {
            Jet e = Jet::zero(Y.nvars(), Y.order());
            for (int b = 0; b < s; ++b) {
                const Rational& w = m.metric_inv.at(b, g);
                if (w != 0) e += w * em.B.at(a, b);
            }
            em.A.at(a, g) = e;
        }
    return em;
}

/* Eigenvector frame from alternated sigma-minors: z_alpha(t) is (-1)^alpha
 * times the minor of (A - tI) on the chosen row subset with column alpha
 * removed, so (A - tI)[rows] z(t) = 0 identically in t. */
struct MinorFrame {
    std::vector<int> rows;             // sigma row indices in 0..sigma
    std::vector<detail::PolyJet> z;    // sigma+1 polynomials of degree <= sigma
};

namespace detail {

inline MinorFrame build_minor_frame(const JetMatrix& A, const std::vector<int>& rows) {
    const int s = A.rows();     // sigma + 1
    const int nv = A.nvars(), ord = A.order();
    // entries of A - tI as degree-1 polynomials
    auto entry = [&](int i, int j) {
        PolyJet p{A.at(i, j), Jet::zero(nv, ord)};
        if (i == j) p[1] = Jet::constant(nv, ord, -1);
        return p;
    };
    std::map<std::pair<int, unsigned>, PolyJet> memo;
    // determinant over rows[r..] and the columns of `mask`
    auto det = [&](auto&& self, int r, unsigned mask) -> PolyJet {
        if (r == static_cast<int>(rows.size())) return PolyJet{Jet::constant(nv, ord, 1)};
        auto key = std::make_pair(r, mask);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        PolyJet acc{Jet::zero(nv, ord)};
        int pos = 0;
        for (int j = 0; j < s; ++j) {
            if (!(mask & (1u << j))) continue;
            PolyJet term = pj_mul(entry(rows[r], j), self(self, r + 1, mask & ~(1u << j)));
            if (pos % 2 == 0)
                pj_axpy(acc, 1, term);
            else
                pj_axpy(acc, -1, term);
            ++pos;
        }
        memo.emplace(key, acc);
        return acc;
    };
    MinorFrame f;
    f.rows = rows;
    unsigned full = (1u << s) - 1;
    for (int alpha = 0; alpha < s; ++alpha) {
        PolyJet za = det(det, 0, full & ~(1u << alpha));
        if (alpha % 2 == 1)
            for (auto& c : za) c = -c;
        za.resize(s, Jet::zero(nv, ord)); // uniform degree sigma storage
        f.z.push_back(std::move(za));
    }
    return f;
}

// denominator polynomial D(t) = (z^T gbar z) z_0 at the constant term only
inline PolyQ frame_denominator_const(const FanoModel& m, const MinorFrame& f) {
    const int s = m.sigma + 1;
    std::vector<PolyQ> zc;
    for (const auto& zp : f.z) zc.push_back(pj_constant_terms(zp));
    PolyQ zgz(2 * s - 1, Rational(0));
    for (int d = 0; d < s; ++d)
        for (int e = 0; e < s; ++e) {
            const Rational& w = m.metric_inv.at(d, e);
            if (w == 0) continue;
            for (std::size_t i = 0; i < zc[d].size(); ++i)
                for (std::size_t j = 0; j < zc[e].size(); ++j)
                    zgz[i + j] += w * zc[d][i] * zc[e][j];
        }
    PolyQ den(zgz.size() + zc[0].size() - 1, Rational(0));
    for (std::size_t i = 0; i < zgz.size(); ++i)
        for (std::size_t j = 0; j < zc[0].size(); ++j) den[i + j] += zgz[i] * zc[0][j];
    return den;
}

inline PolyQ charpoly_const(const JetMatrix& A) {
    JetMatrix c0 = JetMatrix::from_matq(A.constant_matrix(), 0, 0);
    PolyQ chi;
    for (const auto& j : charpoly(c0)) chi.push_back(j.constant_term());
    return chi;
}

} // namespace detail

/* A frame is usable when the constant-term spectrum is simple and the
 * denominator D(t) avoids it: disc(chi) != 0 and Res(chi, D) != 0 at the
 * base point. */
inline bool frame_is_valid(const FanoModel& m, const EulerMatrix& em, const MinorFrame& f) {
    PolyQ chi = detail::charpoly_const(em.A);
    if (discriminant_monic(chi) == 0) return false;
    PolyQ den = detail::frame_denominator_const(m, f);
    return resultant_monic(chi, den) != 0;
}

/* Builds the frame on the given rows, or auto-selects: {1..sigma} first,
 * then the remaining size-sigma subsets of {0..sigma} in lexicographic
 * order, returning the first valid one. A non-simple constant-term spectrum
 * dooms every subset and is reported as a non-tame base point. */
inline MinorFrame minor_frame(const FanoModel& m, const EulerMatrix& em,
                              std::optional<std::vector<int>> rows = std::nullopt) {
    const int s = m.sigma + 1;
    if (rows) {
        if (static_cast<int>(rows->size()) != m.sigma)
            throw Error(ErrorKind::DimensionMismatch, "minor_frame: need exactly sigma rows");
        for (int r : *rows)
            if (r < 0 || r >= s) throw Error(ErrorKind::DimensionMismatch, "minor_frame: row index out of range");
        return detail::build_minor_frame(em.A, *rows);
    }
    PolyQ chi = detail::charpoly_const(em.A);
    if (discriminant_monic(chi) == 0)
        throw Error(ErrorKind::NonTameBasePoint,
                    "non-tame base point: Euler matrix spectrum is not simple");
    std::vector<std::vector<int>> candidates;
    {
        std::vector<int> first;
        for (int i = 1; i < s; ++i) first.push_back(i);
        candidates.push_back(first);
        std::vector<std::vector<int>> rest;
        for (int omit = 1; omit < s; ++omit) {
            std::vector<int> sub;
            for (int i = 0; i < s; ++i)
                if (i != omit) sub.push_back(i);
            rest.push_back(sub);
        }
        std::sort(rest.begin(), rest.end());
        for (auto& r : rest) candidates.push_back(std::move(r));
    }
    for (const auto& rows_try : candidates) {
        MinorFrame f = detail::build_minor_frame(em.A, rows_try);
        if (resultant_monic(chi, detail::frame_denominator_const(m, f)) != 0) return f;
    }
    throw Error(ErrorKind::DegenerateFrame,
                "degenerate frame: no row subset yields a valid eigenvector frame");
}

namespace detail {

/* Core of the root-sum operator. For a function N(t)/D(t) regular on the
 * (simple) spectrum a_i of A, sum_i N(a_i)/D(a_i) = tr(D(A)^{-1} N(A)).
 * With N_{abg}(t) = z_a z_b z_g and D = (z^T gbar z) z_0 this realizes the
 * structure-constant sums without touching eigenvalues. Only triples with
 * all indices >= min_index are filled. */
inline SymTensor3 rootsum_impl(const FanoModel& m, const BigY& Y,
                               std::optional<MinorFrame> frame, int min_index) {
    EulerMatrix em = euler_matrix(m, Y);
    const bool supplied = frame.has_value();
    MinorFrame f = supplied ? std::move(*frame) : minor_frame(m, em);
    if (supplied && !frame_is_valid(m, em, f))
        throw Error(ErrorKind::DegenerateFrame, "rootsum_R: supplied frame is not valid here");

    const int s = m.sigma + 1;
    const int nv = Y.nvars(), ord = Y.order();

    // pairwise products z_a z_b, reused by numerators and the denominator
    std::vector<std::vector<PolyJet>> zz(s, std::vector<PolyJet>(s));
    for (int a = 0; a < s; ++a)
        for (int b = a; b < s; ++b) zz[a][b] = pj_mul(f.z[a], f.z[b]);
    auto zz_at = [&](int a, int b) -> const PolyJet& { return a <= b ? zz[a][b] : zz[b][a]; };

    PolyJet zgz{Jet::zero(nv, ord)};
    for (int d = 0; d < s; ++d)
        for (int e = d; e < s; ++e) {
            Rational w = m.metric_inv.at(d, e);
            if (d != e) w += m.metric_inv.at(e, d);
            if (w != 0) pj_axpy(zgz, w, zz_at(d, e));
        }
    PolyJet den = pj_mul(zgz, f.z[0]);

    // powers of A up to the largest polynomial degree in play
    const std::size_t maxdeg = 3 * static_cast<std::size_t>(m.sigma);
    std::vector<JetMatrix> pw;
    pw.push_back(JetMatrix::identity(s, nv, ord));
    for (std::size_t k = 1; k <= maxdeg; ++k) pw.push_back(pw.back() * em.A);

    auto eval_at_A = [&](const PolyJet& p) {
        JetMatrix r(s, s, nv, ord);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k].is_zero()) continue;
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) {
                    if (pw[k].at(i, j).is_zero()) continue;
                    r.at(i, j) += p[k] * pw[k].at(i, j);
                }
        }
        return r;
    };

    JetMatrix dinv;
    try {
        dinv = jetmat_solve(eval_at_A(den), JetMatrix::identity(s, nv, ord));
    } catch (const Error& e) {
        if (e.kind == ErrorKind::DegenerateFrame)
            throw Error(ErrorKind::NonTameBasePoint,
                        "non-tame base point: denominator matrix not invertible");
        throw;
    }

    // traces tr(D(A)^{-1} A^k); each numerator then contracts against these
    std::vector<Jet> tk;
    for (std::size_t k = 0; k <= maxdeg; ++k) {
        Jet t = Jet::zero(nv, ord);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                if (dinv.at(i, j).is_zero() || pw[k].at(j, i).is_zero()) continue;
                t += dinv.at(i, j) * pw[k].at(j, i);
            }
        tk.push_back(t);
    }

    SymTensor3 R(s, nv, ord);
    std::vector<std::array<int, 3>> triples;
    for (int a = min_index; a < s; ++a)
        for (int b = a; b < s; ++b)
            for (int g = b; g < s; ++g) triples.push_back({a, b, g});
    parallel_for(triples.size(), [&](std::size_t idx) {
        auto [a, b, g] = triples[idx];
        PolyJet num = pj_mul(zz_at(a, b), f.z[g]);
        Jet val = Jet::zero(nv, ord);
        for (std::size_t k = 0; k < num.size(); ++k) {
            if (num[k].is_zero()) continue;
            val += num[k] * tk[k];
        }
        R.at(a, b, g) = std::move(val);
    });
    return R;
}

} // namespace detail

// Full structure-constant tensor R_{abg} over indices 0..sigma.
inline SymTensor3 rootsum_R(const FanoModel& m, const BigY& Y,
                            std::optional<MinorFrame> frame = std::nullopt) {
    return detail::rootsum_impl(m, Y, std::move(frame), 0);
}

/* Reduced tensor r_{abc} = R_{abc} - g_{abc} on the coordinate directions
 * (the right-hand sides of the differential system). */
inline SymTensor3 reduced_r(const FanoModel& m, const std::vector<Jet>& x, const SymJet& y,
                            std::optional<MinorFrame> frame = std::nullopt) {
    BigY Y = assemble_bigY(m, x, y);
    SymTensor3 R = detail::rootsum_impl(m, Y, std::move(frame), 1);
    const int nv = Y.nvars(), ord = Y.order();
    SymTensor3 r(m.sigma, nv, ord);
    for (int a = 1; a <= m.sigma; ++a)
        for (int b = a; b <= m.sigma; ++b)
            for (int c = b; c <= m.sigma; ++c) {
                Jet v = R.at(a, b, c);
                long long g = m.g3_at(a, b, c);
                if (g != 0) v -= Jet::constant(nv, ord, g);
                r.at(a - 1, b - 1, c - 1) = std::move(v);
            }
    return r;
}

/* Residual of the quasi-homogeneity constraint on the reduced tensor:
 * sum_c (c_c + (1-p_c) x_c) r_{abc} - (1-n+p_a+p_b) y_{ab}.
 * This is the Euler identity on the full tensor, sum_g E_g R_{abg} =
 * c2_{ab} + K_{ab} Y_{ab}, rewritten through R = g + r and Y = gx + y;
 * the classical terms cancel because (1-p_c) = K_{ab} wherever g_{abc}
 * is nonzero and c2 sits in the K_{ab} = 0 slots. */
inline SymJet constraint_residual(const FanoModel& m, const std::vector<Jet>& x, const SymJet& y,
                                  std::optional<SymTensor3> precomputed_r = std::nullopt) {
    SymTensor3 r = precomputed_r ? std::move(*precomputed_r) : reduced_r(m, x, y);
    const int nv = x[0].nvars(), ord = x[0].order();
    SymJet res(m.sigma, nv, ord);
    for (int a = 1; a <= m.sigma; ++a)
        for (int b = a; b <= m.sigma; ++b) {
            Jet acc = Jet::zero(nv, ord);
            for (int c = 1; c <= m.sigma; ++c) {
                Jet coeff = Jet::constant(nv, ord, m.c[c]) + Rational(1 - m.p[c]) * x[c - 1];
                acc += coeff * r.at(a - 1, b - 1, c - 1);
            }
            acc -= Rational(m.k_weight(a, b)) * y.at(a - 1, b - 1);
            res.at(a - 1, b - 1) = std::move(acc);
        }
    return res;
}

/* Associator of the product with structure constants C_{ab}^e =
 * sum_d R_{abd} gbar_{de}; vanishes identically wherever the root sum
 * evaluates. */
inline Tensor4 associativity_residual(const FanoModel& m, const std::vector<Jet>& x,
                                      const SymJet& y) {
    BigY Y = assemble_bigY(m, x, y);
    SymTensor3 R = rootsum_R(m, Y);
    const int s = m.sigma + 1;
    const int nv = Y.nvars(), ord = Y.order();
    std::vector<Jet> C(static_cast<std::size_t>(s) * s * s, Jet::zero(nv, ord));
    auto cat = [&](int a, int b, int e) -> Jet& {
        return C[(static_cast<std::size_t>(a) * s + b) * s + e];
    };
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            for (int e = 0; e < s; ++e) {
                Jet acc = Jet::zero(nv, ord);
                for (int d = 0; d < s; ++d) {
                    const Rational& w = m.metric_inv.at(d, e);
                    if (w != 0) acc += w * R.at(a, b, d);
                }
                cat(a, b, e) = std::move(acc);
            }
    Tensor4 res(s, nv, ord);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            for (int g = 0; g < s; ++g)
                for (int d = 0; d < s; ++d) {
                    Jet acc = Jet::zero(nv, ord);
                    for (int e = 0; e < s; ++e)
                        acc += cat(a, b, e) * cat(e, g, d) - cat(b, g, e) * cat(e, a, d);
                    res.at(a, b, g, d) = std::move(acc);
                }
    return res;
}

struct TamenessReport {
    bool semisimple = false;
    bool tame = false;
    Rational disc;
};

/* Tameness certificate at a rational point: discriminant of the constant
 * term of the characteristic polynomial of the Euler matrix. A simple
 * spectrum of Euler multiplication also certifies a semisimple tangent
 * algebra, so both flags share the certificate; the engine has no separate
 * test for semisimple-but-not-tame points (evaluating the structure
 * constants already needs the simple spectrum). */
inline TamenessReport tameness_report(const FanoModel& m, const std::vector<Rational>& x,
                                      const MatQ& y) {
    if (static_cast<int>(x.size()) != m.sigma || y.rows() != m.sigma || y.cols() != m.sigma)
        throw Error(ErrorKind::DimensionMismatch, "tameness_report: point arity mismatch");
    std::vector<Jet> xj;
    for (const auto& v : x) xj.push_back(Jet::constant(0, 0, v));
    SymJet yj(m.sigma, 0, 0);
    for (int i = 0; i < m.sigma; ++i)
        for (int j = i; j < m.sigma; ++j) yj.at(i, j) = Jet::constant(0, 0, y.at(i, j));
    EulerMatrix em = euler_matrix(m, assemble_bigY(m, xj, yj));
    TamenessReport rep;
    rep.disc = discriminant_monic(detail::charpoly_const(em.A));
    rep.tame = rep.disc != 0;
    rep.semisimple = rep.tame;
    return rep;
}

} // namespace gwrec

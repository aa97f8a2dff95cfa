// Acceptance gate: one self-contained scenario per criterion, each printed
// as a PASS/FAIL line with its runtime. Exit status is the failure count.

#include "gwrec/gwrec.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

using namespace gwrec;

namespace {

std::string why; // set by a failing criterion

bool fail(const std::string& reason) {
    why = reason;
    return false;
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(unsigned long long seed) : eng(seed) {}
    long ranged(long lo, long hi) {
        return lo + static_cast<long>(eng() % static_cast<unsigned long long>(hi - lo + 1));
    }
    Rational rational(long span = 6, long maxden = 4) {
        return Rational(ranged(-span, span), ranged(1, maxden));
    }
    Rational nonzero(long span = 6, long maxden = 4) {
        for (;;) {
            Rational r = rational(span, maxden);
            if (r != 0) return r;
        }
    }
};

std::vector<Jet> const_x(const std::vector<Rational>& x) {
    std::vector<Jet> xs;
    for (const auto& v : x) xs.push_back(Jet::constant(0, 0, v));
    return xs;
}

SymJet const_y(const MatQ& y) {
    SymJet s(y.rows(), 0, 0);
    for (int a = 0; a < y.rows(); ++a)
        for (int b = a; b < y.rows(); ++b) s.at(a, b) = Jet::constant(0, 0, y.at(a, b));
    return s;
}

void random_point(const FanoModel& m, Rng& rng, std::vector<Rational>& x, MatQ& y) {
    x.assign(m.sigma, Rational(0));
    for (auto& v : x) v = rng.rational();
    y = MatQ(m.sigma, m.sigma);
    for (int a = 0; a < m.sigma; ++a)
        for (int b = a; b < m.sigma; ++b) {
            Rational v = rng.rational();
            y.at(a, b) = v;
            y.at(b, a) = v;
        }
}

void random_tame_point(const FanoModel& m, Rng& rng, std::vector<Rational>& x, MatQ& y) {
    do
        random_point(m, rng, x, y);
    while (!tameness_report(m, x, y).tame);
}

// ---------------------------------------------------------------- criterion 1

bool crit1() {
    FanoModel m = builtin("P1");
    Rng rng(101);
    for (int i = 0; i < 20; ++i) {
        Rational x1 = rng.rational();
        Rational y11 = rng.nonzero();
        MatQ y(1, 1);
        y.at(0, 0) = y11;
        SymTensor3 r = reduced_r(m, const_x({x1}), const_y(y));
        if (!(r.at(0, 0, 0).constant_term() == y11))
            return fail("r_111 != y_11 at sample " + std::to_string(i));
    }
    for (Rational q : {Rational(1), Rational(7, 3)}) {
        InitialData init{{{1}, BigInt(1)}};
        SolutionJet sol = propagate(m, make_base_point(m, {Rational(0)}, {q}), init, 8);
        Rational fact(1);
        for (long k = 0; k <= 8; ++k) {
            if (k > 1) fact *= k;
            if (!(sol.y.at(0, 0).coeff({static_cast<int>(k)}) == q / fact))
                return fail("jet coefficient " + std::to_string(k) + " is not q/k!");
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 2

struct PlanePoint {
    std::vector<Rational> x;
    MatQ y;
};

std::vector<PlanePoint> plane_points() {
    FanoModel m = builtin("P2");
    Rng rng(202);
    std::vector<PlanePoint> pts;
    while (pts.size() < 20) {
        PlanePoint p;
        random_point(m, rng, p.x, p.y);
        Rational den = Rational(27) + 3 * p.x[1] * p.y.at(0, 0) -
                       2 * p.x[1] * p.x[1] * p.y.at(0, 1);
        if (den == 0 || !tameness_report(m, p.x, p.y).tame) continue;
        pts.push_back(std::move(p));
    }
    return pts;
}

bool crit2() {
    FanoModel m = builtin("P2");
    for (const auto& p : plane_points()) {
        SymTensor3 r = reduced_r(m, const_x(p.x), const_y(p.y));
        auto closed = oracle::p2_closed_r(p.x[1], p.y.at(0, 0), p.y.at(0, 1), p.y.at(1, 1));
        if (!(r.at(0, 0, 0).constant_term() == closed[0] &&
              r.at(0, 0, 1).constant_term() == closed[1] &&
              r.at(0, 1, 1).constant_term() == closed[2] &&
              r.at(1, 1, 1).constant_term() == closed[3]))
            return fail("closed form mismatch");
    }
    return true;
}

// ---------------------------------------------------------------- criterion 3

bool crit3() {
    FanoModel m = builtin("P2");
    for (const auto& p : plane_points())
        if (!constraint_residual(m, const_x(p.x), const_y(p.y)).is_zero())
            return fail("pointwise residual nonzero");

    InitialData init{{{1, 2}, BigInt(1)}};
    SolutionJet sol = propagate(m, default_base(m), init, 17);
    auto xs = solution_x(m, sol.base, 17);
    if (!constraint_residual(m, xs, sol.y).is_zero())
        return fail("residual nonzero along the order-17 solution");
    return true;
}

// ----------------------------------------------------------- criteria 4 and 5

std::vector<Rational> plane_counts(const Rational& q) {
    FanoModel m = builtin("P2");
    InitialData init{{{1, 2}, BigInt(1)}};
    SolutionJet sol = propagate(m, make_base_point(m, {Rational(0)}, {q}), init, 17);
    GWTable t = extract(m, sol, init, targets_by_degree(m, 6));
    std::vector<Rational> out;
    for (long d = 1; d <= 6; ++d) out.push_back(t.entries.at({d, 3 * d - 1}));
    return out;
}

bool counts_match_oracle(const std::vector<Rational>& counts) {
    auto ns = oracle::kontsevich(6);
    for (std::size_t i = 0; i < 6; ++i)
        if (!(counts[i] == Rational(ns[i]))) return false;
    return true;
}

bool crit4() {
    if (!counts_match_oracle(plane_counts(1))) return fail("mismatch with the recursion at q=1");
    return true;
}

bool crit5() {
    if (!counts_match_oracle(plane_counts(2))) return fail("mismatch with the recursion at q=2");
    return true;
}

// ---------------------------------------------------------------- criterion 6

using Poly = std::vector<Rational>; // ascending coefficients

Poly pmul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// determinant by cofactor expansion over polynomial entries
Poly pdet(const std::vector<std::vector<Poly>>& mat, const std::vector<int>& rows,
          unsigned colmask, int s) {
    if (rows.empty()) return Poly{Rational(1)};
    Poly acc{Rational(0)};
    int pos = 0;
    std::vector<int> rest(rows.begin() + 1, rows.end());
    for (int j = 0; j < s; ++j) {
        if (!(colmask & (1u << j))) continue;
        Poly sub = pdet(mat, rest, colmask & ~(1u << j), s);
        Poly term = pmul(mat[rows[0]][j], sub);
        if (acc.size() < term.size()) acc.resize(term.size(), Rational(0));
        for (std::size_t k = 0; k < term.size(); ++k)
            acc[k] += (pos % 2 == 0) ? term[k] : -term[k];
        ++pos;
    }
    return acc;
}

MatQ horner_eval(const Poly& p, const std::vector<MatQ>& powers, int s) {
    MatQ r(s, s);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0) continue;
        r = r + p[k] * powers[k];
    }
    return r;
}

/* From-scratch evaluation of the structure constants at a rational point:
 * classical second-derivative matrix, Euler operator, explicit minors of
 * A - tI on the chosen rows, then sum_i N(a_i)/D(a_i) = tr(D(A)^{-1} N(A))
 * for every ORDERED triple. Shares no code with the engine's evaluator. */
bool naive_R(const FanoModel& m, const std::vector<Rational>& x, const MatQ& y,
             const std::vector<int>& rows, std::vector<Rational>& out) {
    const int s = m.sigma + 1;
    MatQ Y(s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            Rational e(0);
            for (int c = 1; c <= m.sigma; ++c)
                if (m.g3_at(a, b, c) != 0) e += Rational(m.g3_at(a, b, c)) * x[c - 1];
            if (a >= 1 && b >= 1) e += y.at(a - 1, b - 1);
            Y.at(a, b) = e;
        }
    MatQ B(s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            B.at(a, b) = Rational(m.c2_at(a, b)) + Rational(m.k_weight(a, b)) * Y.at(a, b);
    MatQ A = B * m.metric_inv;

    std::vector<std::vector<Poly>> AtI(s, std::vector<Poly>(s));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            AtI[i][j] = Poly{A.at(i, j)};
            if (i == j) AtI[i][j].push_back(Rational(-1));
        }
    unsigned full = (1u << s) - 1;
    std::vector<Poly> z;
    for (int alpha = 0; alpha < s; ++alpha) {
        Poly za = pdet(AtI, rows, full & ~(1u << alpha), s);
        if (alpha % 2 == 1)
            for (auto& c : za) c = -c;
        z.push_back(std::move(za));
    }
    Poly zgz{Rational(0)};
    for (int d = 0; d < s; ++d)
        for (int e = 0; e < s; ++e) {
            const Rational& w = m.metric_inv.at(d, e);
            if (w == 0) continue;
            Poly t = pmul(z[d], z[e]);
            if (zgz.size() < t.size()) zgz.resize(t.size(), Rational(0));
            for (std::size_t k = 0; k < t.size(); ++k) zgz[k] += w * t[k];
        }
    Poly den = pmul(zgz, z[0]);

    std::vector<MatQ> powers{MatQ::identity(s)};
    for (int k = 1; k <= 3 * m.sigma; ++k) powers.push_back(powers.back() * A);

    MatQ DA = horner_eval(den, powers, s);
    if (DA.det() == 0) return false;
    MatQ Dinv = DA.inverse();

    out.assign(static_cast<std::size_t>(s) * s * s, Rational(0));
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b)
            for (int g = 0; g < s; ++g) {
                MatQ NA = horner_eval(pmul(pmul(z[a], z[b]), z[g]), powers, s);
                MatQ prod = Dinv * NA;
                Rational tr(0);
                for (int i = 0; i < s; ++i) tr += prod.at(i, i);
                out[(static_cast<std::size_t>(a) * s + b) * s + g] = std::move(tr);
            }
    return true;
}

bool crit6() {
    Rng rng(606);
    for (const char* name : {"P1", "P2", "P3", "P4"}) {
        FanoModel m = builtin(name);
        const int s = m.sigma + 1;
        for (int trial = 0; trial < 2; ++trial) {
            std::vector<Rational> x;
            MatQ y;
            random_tame_point(m, rng, x, y);
            auto xs = const_x(x);
            SymJet ys = const_y(y);
            BigY Y = assemble_bigY(m, xs, ys);
            SymTensor3 R = rootsum_R(m, Y);

            // unit row against the intersection form
            for (int a = 0; a < s; ++a)
                for (int b = a; b < s; ++b)
                    if (!(R.at(a, b, 0).constant_term() == Rational(m.g3_at(a, b, 0))))
                        return fail(std::string(name) + ": unit row mismatch");

            // independent recomputation on two different row subsets
            std::vector<std::vector<Rational>> naive;
            for (int omit = 0; omit < s && naive.size() < 2; ++omit) {
                std::vector<int> rows;
                for (int i = 0; i < s; ++i)
                    if (i != omit) rows.push_back(i);
                std::vector<Rational> vals;
                if (naive_R(m, x, y, rows, vals)) naive.push_back(std::move(vals));
            }
            if (naive.size() < 2) return fail(std::string(name) + ": too few usable frames");
            if (naive[0] != naive[1])
                return fail(std::string(name) + ": frame choice changed the values");

            auto idx = [&](int a, int b, int g) {
                return (static_cast<std::size_t>(a) * s + b) * s + g;
            };
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    for (int g = 0; g < s; ++g) {
                        const Rational& v = naive[0][idx(a, b, g)];
                        // full symmetry, checked between independently computed slots
                        if (!(v == naive[0][idx(b, a, g)] && v == naive[0][idx(g, b, a)] &&
                              v == naive[0][idx(a, g, b)]))
                            return fail(std::string(name) + ": symmetry violation");
                        if (!(v == R.at(a, b, g).constant_term()))
                            return fail(std::string(name) + ": engine disagrees with recomputation");
                    }

            // engine-side frame independence on an explicit row subset
            EulerMatrix em = euler_matrix(m, Y);
            std::vector<int> alt;
            for (int i = 0; i < s; ++i)
                if (i != 1) alt.push_back(i);
            MinorFrame f = minor_frame(m, em, alt);
            if (frame_is_valid(m, em, f)) {
                SymTensor3 R2 = rootsum_R(m, Y, f);
                for (int a = 0; a < s; ++a)
                    for (int b = a; b < s; ++b)
                        for (int g = b; g < s; ++g)
                            if (!(R.at(a, b, g) == R2.at(a, b, g)))
                                return fail(std::string(name) + ": engine frame dependence");
            }

            if (!associativity_residual(m, xs, ys).is_zero())
                return fail(std::string(name) + ": associativity residual nonzero");
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 7

bool crit7() {
    FanoModel m = builtin("P3");
    InitialData init{{{1, 0, 2}, BigInt(1)}};
    SolutionJet sol = propagate(m, default_base(m), init, 8);

    GWTable t = extract(m, sol, init, targets_by_degree(m, 2));
    if (t.entries.empty()) return fail("empty table");
    for (const auto& [k, v] : t.entries)
        if (!is_integer(v)) return fail("non-integer entry at N" + key_str(k));

    auto xs = solution_x(m, sol.base, 8);
    SymTensor3 r = reduced_r(m, xs, sol.y);
    if (!constraint_residual(m, xs, sol.y, r).is_zero())
        return fail("constraint residual nonzero on the solution");
    if (!associativity_residual(m, xs, sol.y).is_zero())
        return fail("associativity residual nonzero on the solution");

    // dy_ab = sum_c r_abc dx_c, re-read coefficient by coefficient
    auto L7 = JetLayout::get(3, 7);
    for (std::size_t pos = 0; pos < L7->size(); ++pos) {
        MultiIndex mm = L7->exponent(pos);
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                    MultiIndex up = mm;
                    up[c] += 1;
                    if (!(sol.y.at(a, b).coeff(up) * Rational(up[c]) ==
                          r.at(a, b, c).coeff(mm)))
                        return fail("mixed-partial integrability violated");
                }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 8

bool crit8() {
    for (const char* name : {"P1", "P2", "P3"}) {
        FanoModel m = builtin(name);
        auto classes = initial_classes(m);
        if (classes.empty()) return fail(std::string(name) + ": no initial classes");
        for (long seed_value : {1L, 5L}) {
            InitialData init;
            for (const auto& k : classes) init.emplace(k, BigInt(seed_value));
            SolutionJet sol = propagate(m, default_base(m), init, 3);
            GWTable t = extract(m, sol, init, classes);
            if (!t.warnings.empty()) return fail(std::string(name) + ": unexpected warning");
            for (const auto& k : classes)
                if (!(t.entries.at(k) == Rational(seed_value)))
                    return fail(std::string(name) + ": round-trip changed N" + key_str(k));
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 9

Jet random_jet(Rng& rng, int nvars, int order, bool unit_constant) {
    Jet j = Jet::zero(nvars, order);
    auto layout = JetLayout::get(nvars, order);
    for (std::size_t i = 0; i < layout->size(); ++i)
        j.set_coeff(layout->exponent(i), rng.rational(4, 3));
    if (unit_constant) j.set_coeff(MultiIndex(nvars, 0), rng.nonzero(4, 3));
    return j;
}

bool crit9() {
    Rng rng(909);
    for (int trial = 0; trial < 6; ++trial) {
        Jet a = random_jet(rng, 3, 3, false);
        Jet b = random_jet(rng, 3, 3, false);
        Jet c = random_jet(rng, 3, 3, false);
        if (!((a + b) + c == a + (b + c))) return fail("addition not associative");
        if (!(a * b == b * a)) return fail("multiplication not commutative");
        if (!((a * b) * c == a * (b * c))) return fail("multiplication not associative");
        if (!(a * (b + c) == a * b + a * c)) return fail("distributivity broken");
    }
    for (int trial = 0; trial < 4; ++trial) {
        Jet a = random_jet(rng, 2, 4, true);
        if (!(a * jet_inv(a) == Jet::constant(2, 4, 1))) return fail("inverse broken");
    }
    try {
        jet_inv(Jet::variable(1, 2, 0));
        return fail("inverting a zero-constant jet succeeded");
    } catch (const Error& e) {
        if (e.kind != ErrorKind::NonInvertibleJet) return fail("wrong inverse error kind");
    }
    for (int n : {3, 4}) {
        MatQ M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M.at(i, j) = rng.rational(5, 3);
        auto chi = charpoly(JetMatrix::from_matq(M, 0, 0));
        MatQ acc(n, n);
        for (int k = static_cast<int>(chi.size()) - 1; k >= 0; --k) {
            acc = acc * M;
            Rational ck = chi[k].constant_term();
            if (ck != 0) acc = acc + ck * MatQ::identity(n);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (acc.at(i, j) != 0) return fail("Cayley-Hamilton failed");
    }
    for (int trial = 0; trial < 3; ++trial) {
        JetMatrix A(2, 2, 2, 3), Bm(2, 2, 2, 3);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                A.at(i, j) = random_jet(rng, 2, 3, i == j);
                Bm.at(i, j) = random_jet(rng, 2, 3, false);
            }
        try {
            JetMatrix X = jetmat_solve(A, Bm);
            if (!(A * X == Bm)) return fail("solver round-trip failed");
        } catch (const Error& e) {
            if (e.kind != ErrorKind::DegenerateFrame) return fail("wrong solver error kind");
        }
    }
    if (!(discriminant_monic(PolyQ{-27, 0, 0, 1}) == -19683)) return fail("discriminant broken");
    if (!(resultant_monic(PolyQ{-1, 0, 1}, PolyQ{-4, 0, 1}) == 9)) return fail("resultant broken");
    return true;
}

struct Criterion {
    int id;
    const char* desc;
    bool (*fn)();
    double budget; // seconds
};

const Criterion criteria[] = {
    {1, "line structure constant and exponential solution", crit1, 1.0},
    {2, "plane closed-form structure constants", crit2, 5.0},
    {3, "plane quasi-homogeneity residual", crit3, 30.0},
    {4, "plane curve counts from one seed", crit4, 300.0},
    {5, "base-point invariance of the counts", crit5, 300.0},
    {6, "structural identities at random points", crit6, 60.0},
    {7, "three-space property suite", crit7, 600.0},
    {8, "initial-data round-trip", crit8, 60.0},
    {9, "numeric core properties", crit9, 10.0},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 9) {
            std::fprintf(stderr, "usage: %s [criterion 1..9]\n", argv[0]);
            return 64;
        }
    }
    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        why.clear();
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const Error& e) {
            why = std::string("unexpected error: ") + e.what();
        } catch (const std::exception& e) {
            why = std::string("unexpected exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && secs > c.budget) {
            ok = false;
            why = "over time budget";
        }
        std::printf("%s criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.desc,
                    secs, why.empty() ? "" : " - ", why.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}

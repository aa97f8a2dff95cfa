#pragma once

#include "initial_data.hpp"
#include "structure_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gwrec {

/* Expansion point of the deformation: divisor coordinates sit at xi_a with
 * Novikov parameter q_a = exp(xi_a) treated as an independent rational,
 * coordinates above rho at zero. */
struct BasePoint {
    std::vector<Rational> xi; // size sigma, zero above rho
    std::vector<Rational> q;  // size rho, nonzero
};

inline BasePoint make_base_point(const FanoModel& m, std::vector<Rational> xi,
                                 std::vector<Rational> q) {
    if (!m.validated)
        throw Error(ErrorKind::ValidationError, "make_base_point: model not validated");
    if (static_cast<int>(xi.size()) == m.rho) xi.resize(m.sigma, Rational(0));
    if (static_cast<int>(xi.size()) != m.sigma)
        throw Error(ErrorKind::DimensionMismatch,
                    "make_base_point: need rho or sigma xi values, got " +
                        std::to_string(xi.size()));
    for (int a = m.rho + 1; a <= m.sigma; ++a)
        if (xi[a - 1] != 0)
            throw Error(ErrorKind::ValidationError,
                        "make_base_point: xi_" + std::to_string(a) +
                            " must be zero (non-divisor direction)");
    if (static_cast<int>(q.size()) != m.rho)
        throw Error(ErrorKind::DimensionMismatch,
                    "make_base_point: need rho q values, got " + std::to_string(q.size()));
    for (int a = 1; a <= m.rho; ++a)
        if (q[a - 1] == 0)
            throw Error(ErrorKind::ValidationError,
                        "make_base_point: q_" + std::to_string(a) + " must be nonzero");
    return BasePoint{std::move(xi), std::move(q)};
}

inline BasePoint default_base(const FanoModel& m) {
    return make_base_point(m, std::vector<Rational>(m.sigma, Rational(0)),
                           std::vector<Rational>(m.rho, Rational(1)));
}

inline Rational rational_pow(Rational x, long e) {
    if (e < 0) {
        if (x == 0) throw Error(ErrorKind::ValidationError, "rational_pow: 0 to negative power");
        x = Rational(1) / x;
        e = -e;
    }
    Rational r(1);
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

namespace detail {

inline Rational q_weight(const BasePoint& b, const std::vector<long>& k) {
    Rational w(1);
    for (std::size_t i = 0; i < k.size(); ++i) w *= rational_pow(b.q[i], k[i]);
    return w;
}

} // namespace detail

/* y_ab at the base point, summed over the curve classes the grading allows.
 * The enumerative weight of a class k depends on how many of the two
 * remaining insertions are divisors: each divisor insertion in direction a
 * contributes a factor k_a. Data absent from `init` count as zero (with a
 * warning), so a truncated initial set still produces the subring it
 * spans. */
inline MatQ initial_y(const FanoModel& m, const BasePoint& b, const InitialData& init,
                      std::vector<std::string>* warnings = nullptr) {
    if (!m.validated)
        throw Error(ErrorKind::ValidationError, "initial_y: model not validated");
    const int w = m.sigma - m.rho;
    MatQ y(m.sigma, m.sigma);
    for (int a = 1; a <= m.sigma; ++a)
        for (int bb = a; bb <= m.sigma; ++bb) {
            std::vector<long> suffix(w, 0);
            if (a > m.rho) suffix[a - m.rho - 1] += 1;
            if (bb > m.rho) suffix[bb - m.rho - 1] += 1;
            Rational acc(0);
            for (const auto& k : solve_grading(m, suffix)) {
                GWKey key = k;
                key.insert(key.end(), suffix.begin(), suffix.end());
                auto it = init.find(key);
                if (it == init.end()) {
                    if (warnings)
                        warnings->push_back("missing initial datum N" + key_str(key) +
                                            ", using 0");
                    continue;
                }
                Rational term(it->second);
                if (a <= m.rho) term *= k[a - 1];
                if (bb <= m.rho) term *= k[bb - 1];
                acc += term * detail::q_weight(b, k);
            }
            y.at(a - 1, bb - 1) = acc;
            y.at(bb - 1, a - 1) = std::move(acc);
        }
    return y;
}

/* Taylor expansion of the solution y(t) around the base point, jets in the
 * sigma deformation directions. */
struct SolutionJet {
    BasePoint base;
    int order = 0;
    SymJet y;
};

// coordinate jets x_a = xi_a + t_a
inline std::vector<Jet> solution_x(const FanoModel& m, const BasePoint& b, int order) {
    std::vector<Jet> xs;
    for (int a = 1; a <= m.sigma; ++a) {
        Jet x = Jet::variable(m.sigma, order, a - 1);
        if (b.xi[a - 1] != 0) x += Jet::constant(m.sigma, order, b.xi[a - 1]);
        xs.push_back(std::move(x));
    }
    return xs;
}

/* Integrates dy_ab/dx_c = r_abc(x, y) degree by degree from the constant
 * terms y0. Each degree-(d+1) coefficient of y_ab is determined by any
 * direction c appearing in the monomial; the first one is used and the
 * others are verified, which checks integrability of the right-hand sides
 * along the way. */
inline SolutionJet propagate(const FanoModel& m, const BasePoint& b, const MatQ& y0, int order) {
    if (!m.validated)
        throw Error(ErrorKind::ValidationError, "propagate: model not validated");
    if (order < 0) throw Error(ErrorKind::ValidationError, "propagate: negative order");
    TamenessReport rep = tameness_report(m, b.xi, y0);
    if (!rep.tame)
        throw Error(ErrorKind::NonTameBasePoint,
                    "propagate: base point is not tame (discriminant vanishes)");

    const int s = m.sigma;
    SymJet y(s, s, order);
    for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) y.at(i, j) = Jet::constant(s, order, y0.at(i, j));

    auto L = JetLayout::get(s, order);
    for (int d = 0; d < order; ++d) {
        std::vector<Jet> xs = solution_x(m, b, d);
        SymTensor3 r = reduced_r(m, xs, y.truncated(d));
        for (std::size_t pos = L->size_at_order(d); pos < L->size_at_order(d + 1); ++pos) {
            const MultiIndex& mm = L->exponent(pos);
            for (int i = 0; i < s; ++i)
                for (int j = i; j < s; ++j) {
                    std::optional<Rational> val;
                    for (int c = 0; c < s; ++c) {
                        if (mm[c] == 0) continue;
                        MultiIndex down = mm;
                        down[c] -= 1;
                        Rational v = r.at(i, j, c).coeff(down) / mm[c];
                        if (!val) {
                            val = std::move(v);
                        } else if (*val != v) {
                            throw Error(ErrorKind::IntegrabilityFailure,
                                        "propagate: inconsistent mixed derivative of y_{" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                            "} at degree " + std::to_string(d + 1));
                        }
                    }
                    y.at(i, j).set_coeff(mm, std::move(*val));
                }
        }
    }
    return SolutionJet{b, order, std::move(y)};
}

inline SolutionJet propagate(const FanoModel& m, const BasePoint& b, const InitialData& init,
                             int order, std::vector<std::string>* warnings = nullptr) {
    return propagate(m, b, initial_y(m, b, init, warnings), order);
}

/* Derivative of the generating series at the base point, addressed by a
 * full multi-index over the sigma directions (total order >= 2). Reads the
 * third-derivative data y_ab: split off one e_a + e_b with the smallest
 * admissible a, then b, and scale the remaining Taylor coefficient back to
 * a derivative. */
inline Rational jet_f_derivative(const FanoModel& m, const SolutionJet& sol,
                                 const std::vector<long>& idx) {
    if (static_cast<int>(idx.size()) != m.sigma)
        throw Error(ErrorKind::DimensionMismatch, "jet_f_derivative: multi-index arity mismatch");
    long total = 0;
    for (long v : idx) {
        if (v < 0)
            throw Error(ErrorKind::ValidationError, "jet_f_derivative: negative derivative order");
        total += v;
    }
    if (total < 2)
        throw Error(ErrorKind::ValidationError,
                    "jet_f_derivative: derivative order must be at least 2");
    if (total - 2 > sol.order)
        throw Error(ErrorKind::InsufficientJetOrder,
                    "jet_f_derivative: needs jet order " + std::to_string(total - 2) +
                        ", solution has " + std::to_string(sol.order),
                    total - 2);
    int a = 0;
    while (idx[a] == 0) ++a;
    MultiIndex rest(idx.begin(), idx.end());
    rest[a] -= 1;
    int bb = a;
    while (rest[bb] == 0) ++bb;
    rest[bb] -= 1;
    Rational f(1);
    for (int v = 0; v < m.sigma; ++v)
        for (int k = 2; k <= rest[v]; ++k) f *= k;
    return f * sol.y.at(a, bb).coeff(rest);
}

} // namespace gwrec

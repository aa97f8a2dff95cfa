#pragma once

#include "jet.hpp"

#include <array>
#include <vector>

/* Independent reference values for tests: closed-form solutions for the
 * smallest projective spaces and the classical plane-curve counts. Nothing
 * here touches the engine headers. */

namespace gwrec::oracle {

/* Rational plane curves of degree d through 3d-1 points, from the quadratic
 * recursion seeded with N_1 = 1. Returns N_1..N_dmax. */
inline std::vector<BigInt> kontsevich(int dmax) {
    std::vector<BigInt> n(dmax + 1);
    if (dmax >= 1) n[1] = 1;
    for (int d = 2; d <= dmax; ++d) {
        BigInt acc = 0;
        for (int d1 = 1; d1 < d; ++d1) {
            int d2 = d - d1;
            BigInt term = BigInt(d2) * binomial(3 * d - 4, 3 * d1 - 2) -
                          BigInt(d1) * binomial(3 * d - 4, 3 * d1 - 1);
            acc += BigInt(d1) * d1 * d2 * term * n[d1] * n[d2];
        }
        n[d] = acc;
    }
    return std::vector<BigInt>(n.begin() + 1, n.end());
}

// the line's potential: y_11(t) = q e^t
inline Jet p1_solution(const Rational& q, int order) {
    return q * Jet::exp_direction(1, order, 0);
}

/* The plane's structure constants in closed form. Works over any field-like
 * T carrying +, *, scalar multiples and a division hook. */
template <class T, class Div>
std::array<T, 4> p2_closed_r_impl(const T& x2, const T& y11, const T& y12, const T& y22,
                                  const T& one, Div div) {
    T den = Rational(27) * one + Rational(3) * x2 * y11 - Rational(2) * x2 * x2 * y12;
    T n111 = Rational(9) * y11 + x2 * (y11 * y11 + Rational(6) * y12) +
             Rational(3) * x2 * x2 * y22;
    T n112 = Rational(18) * y12 + x2 * (Rational(2) * y11 * y12 + Rational(9) * y22);
    T n122 = Rational(27) * y22 + Rational(4) * x2 * y12 * y12;
    T n222 = Rational(12) * y12 * y12 - Rational(9) * y11 * y22 +
             Rational(6) * x2 * y12 * y22;
    return {div(n111, den), div(n112, den), div(n122, den), div(n222, den)};
}

inline std::array<Rational, 4> p2_closed_r(const Rational& x2, const Rational& y11,
                                           const Rational& y12, const Rational& y22) {
    return p2_closed_r_impl<Rational>(x2, y11, y12, y22, Rational(1),
                                      [](const Rational& a, const Rational& b) {
                                          if (b == 0)
                                              throw Error(ErrorKind::NonTameBasePoint,
                                                          "p2_closed_r: denominator vanishes");
                                          return a / b;
                                      });
}

inline std::array<Jet, 4> p2_closed_r(const Jet& x2, const Jet& y11, const Jet& y12,
                                      const Jet& y22) {
    Jet one = Jet::constant(x2.nvars(), x2.order(), 1);
    return p2_closed_r_impl<Jet>(x2, y11, y12, y22, one,
                                 [](const Jet& a, const Jet& b) { return a * jet_inv(b); });
}

} // namespace gwrec::oracle

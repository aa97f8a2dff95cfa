#include "gwrec/gwrec.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gwrec;
using testutil::Rng;

TEST_CASE("plane curve counts from the two-point recursion") {
    auto n = oracle::kontsevich(6);
    REQUIRE(n.size() == 6);
    CHECK(n[0] == BigInt(1));
    CHECK(n[1] == BigInt(1));
    CHECK(n[2] == BigInt(12));
    CHECK(n[3] == BigInt(620));
    CHECK(n[4] == BigInt(87304));
    CHECK(n[5] == BigInt(26312976));

    SECTION("the numbers stay positive integers and grow") {
        auto big = oracle::kontsevich(10);
        REQUIRE(big.size() == 10);
        for (std::size_t i = 1; i + 1 < big.size(); ++i) CHECK(big[i] < big[i + 1]);
        for (const auto& v : big) CHECK(v > 0);
    }
}

TEST_CASE("line series is the scaled exponential") {
    Jet s = oracle::p1_solution(5, 4);
    for (int k = 0; k <= 4; ++k) {
        MultiIndex mi{k};
        CHECK(s.coeff(mi) == Rational(5) / factorial(k));
    }
}

TEST_CASE("plane structure constants in closed form") {
    SECTION("frozen values") {
        auto r = oracle::p2_closed_r(Rational(1), Rational(1), Rational(1), Rational(1));
        CHECK(r[0] == Rational(19, 28));
        CHECK(r[1] == Rational(29, 28));
        CHECK(r[2] == Rational(31, 28));
        CHECK(r[3] == Rational(9, 28));

        auto base = oracle::p2_closed_r(Rational(0), Rational(0), Rational(0), Rational(1));
        CHECK(base[0] == 0);
        CHECK(base[1] == 0);
        CHECK(base[2] == 1);
        CHECK(base[3] == 0);
    }
    SECTION("vanishing denominator 27 + 3 x2 y11 - 2 x2^2 y12") {
        CHECK_THROWS_MATCHES(oracle::p2_closed_r(Rational(3), Rational(-3), Rational(0), Rational(1)),
                             Error, testutil::HasKind(ErrorKind::NonTameBasePoint));
    }
    SECTION("jet overload agrees with the rational one on constants") {
        auto rj = oracle::p2_closed_r(Jet::constant(1, 2, 1), Jet::constant(1, 2, 1),
                                      Jet::constant(1, 2, 1), Jet::constant(1, 2, 1));
        CHECK(rj[0] == Jet::constant(1, 2, Rational(19, 28)));
        CHECK(rj[3] == Jet::constant(1, 2, Rational(9, 28)));
    }
}

namespace {

// engine tensor vs closed forms with every coordinate an independent jet
// direction; agreement in particular proves the x_1 slot never enters
void compare_symbolic(const Rational& x1b, const Rational& x2b, const MatQ& yb, int order) {
    FanoModel m = builtin("P2");
    auto var_at = [&](Rational base, int v) {
        Jet j = Jet::variable(5, order, v);
        if (base != 0) j += Jet::constant(5, order, base);
        return j;
    };
    std::vector<Jet> xs{var_at(x1b, 0), var_at(x2b, 1)};
    SymJet ys(2, 5, order);
    ys.at(0, 0) = var_at(yb.at(0, 0), 2);
    ys.at(0, 1) = var_at(yb.at(0, 1), 3);
    ys.at(1, 1) = var_at(yb.at(1, 1), 4);

    SymTensor3 r = reduced_r(m, xs, ys);
    auto closed = oracle::p2_closed_r(xs[1], ys.at(0, 0), ys.at(0, 1), ys.at(1, 1));
    CHECK(r.at(0, 0, 0) == closed[0]);
    CHECK(r.at(0, 0, 1) == closed[1]);
    CHECK(r.at(0, 1, 1) == closed[2]);
    CHECK(r.at(1, 1, 1) == closed[3]);
}

} // namespace

TEST_CASE("engine equals the closed forms as a symbolic identity") {
    SECTION("around the enumerative base point") {
        MatQ y(2, 2);
        y.at(1, 1) = 1;
        compare_symbolic(0, 0, y, 3);
    }
    SECTION("around a random tame point") {
        Rng rng(601);
        FanoModel m = builtin("P2");
        std::vector<Rational> x;
        MatQ y;
        for (;;) {
            rng.point(m, x, y);
            if (tameness_report(m, x, y).tame) break;
        }
        compare_symbolic(x[0], x[1], y, 2);
    }
}

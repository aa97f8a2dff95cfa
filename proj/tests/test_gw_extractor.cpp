#include "gwrec/gwrec.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gwrec;

namespace {

const char* quadric_text = R"(name Q2
dim 2
sigma 3
rho 2
p 0 1 1 2
c 0 2 2 0
g 0 0 3 1
g 0 1 2 1
g 1 1 2 0
)";

} // namespace

TEST_CASE("graded class enumeration") {
    SECTION("plane") {
        FanoModel m = builtin("P2");
        CHECK(solve_grading(m, {2}) == std::vector<std::vector<long>>{{1}});
        CHECK(solve_grading(m, {5}) == std::vector<std::vector<long>>{{2}});
        CHECK(solve_grading(m, {8}) == std::vector<std::vector<long>>{{3}});
        CHECK(solve_grading(m, {0}).empty());
        CHECK(solve_grading(m, {1}).empty());
    }
    SECTION("line and three-space") {
        CHECK(solve_grading(builtin("P1"), {}) == std::vector<std::vector<long>>{{1}});
        FanoModel m = builtin("P3");
        CHECK(solve_grading(m, {0, 2}) == std::vector<std::vector<long>>{{1}});
        CHECK(solve_grading(m, {2, 3}) == std::vector<std::vector<long>>{{2}});
        CHECK(solve_grading(m, {4, 2}) == std::vector<std::vector<long>>{{2}});
    }
    SECTION("two divisor directions") {
        FanoModel m = parse_model(quadric_text);
        auto classes = solve_grading(m, {1});
        CHECK(classes == std::vector<std::vector<long>>{{0, 1}, {1, 0}});
    }
    SECTION("nonpositive degree makes the set unbounded") {
        FanoModel m = builtin("P2");
        m.c[1] = 0;
        CHECK_THROWS_MATCHES(solve_grading(m, {2}), Error,
                             testutil::HasKind(ErrorKind::UnboundedInitialSet));
    }
    SECTION("argument shape") {
        FanoModel m = builtin("P2");
        CHECK_THROWS_MATCHES(solve_grading(m, {1, 2}), Error,
                             testutil::HasKind(ErrorKind::DimensionMismatch));
        CHECK_THROWS_MATCHES(solve_grading(m, {-1}), Error,
                             testutil::HasKind(ErrorKind::DimensionMismatch));
    }
}

TEST_CASE("grading predicate and insertion counting") {
    FanoModel m = builtin("P2");
    CHECK(grading_holds(m, {1, 2}));
    CHECK(grading_holds(m, {2, 5}));
    CHECK(grading_holds(m, {3, 8}));
    CHECK_FALSE(grading_holds(m, {1, 1}));
    CHECK_FALSE(grading_holds(m, {0, 0}));
    CHECK_FALSE(grading_holds(m, {0, 2}));

    FanoModel p3 = builtin("P3");
    CHECK(nondivisor_total(p3, {2, 1, 3}) == 4);
    CHECK(nondivisor_total(m, {5, 0}) == 0);
}

TEST_CASE("initial classes of the built-in models") {
    CHECK(initial_classes(builtin("P1")) == std::vector<GWKey>{{1}});
    CHECK(initial_classes(builtin("P2")) == std::vector<GWKey>{{1, 2}});
    CHECK(initial_classes(builtin("P3")) == std::vector<GWKey>{{1, 0, 2}});
    // a line through two points: the grading 5k_1 = 2(p_4 - 1) - 1 pins it
    CHECK(initial_classes(builtin("P4")) == std::vector<GWKey>{{1, 0, 0, 2}});

    FanoModel m = builtin("P2");
    CHECK(is_initial_class(m, {1, 2}));
    CHECK_FALSE(is_initial_class(m, {2, 5})); // grading fine, too many insertions
    FanoModel p3 = builtin("P3");
    CHECK(is_initial_class(p3, {1, 0, 2}));
    CHECK_FALSE(is_initial_class(p3, {1, 2, 1}));
}

TEST_CASE("initial data text format") {
    FanoModel m = builtin("P2");

    SECTION("parse with comments") {
        InitialData d = parse_initial_data("# one line through two points\nN 1 2 = 1\n", m);
        REQUIRE(d.size() == 1);
        CHECK(d.at({1, 2}) == BigInt(1));
    }
    SECTION("round-trip") {
        InitialData d{{{1, 2}, BigInt(-7)}};
        CHECK(parse_initial_data(serialize_initial_data(d), m) == d);
    }
    SECTION("diagnostics") {
        CHECK_THROWS_MATCHES(parse_initial_data("M 1 2 = 1\n", m), Error,
                             testutil::HasKind(ErrorKind::ParseError));
        CHECK_THROWS_MATCHES(parse_initial_data("N 1 = 1\n", m), Error,
                             testutil::HasKind(ErrorKind::ParseError));
        CHECK_THROWS_MATCHES(parse_initial_data("N 1 2 = x\n", m), Error,
                             testutil::HasKind(ErrorKind::ParseError));
        CHECK_THROWS_MATCHES(parse_initial_data("N 2 5 = 7\n", m), Error,
                             testutil::HasKind(ErrorKind::ValidationError));
        CHECK_THROWS_MATCHES(parse_initial_data("N 1 2 = 1\nN 1 2 = 2\n", m), Error,
                             testutil::HasKind(ErrorKind::ConflictError));
        try {
            parse_initial_data("N 1 2 = 1\nN 1 2 = 2\n", m);
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
}

TEST_CASE("interpolation basis") {
    SECTION("three points on a line") {
        auto basis = lagrange_basis({{1}, {2}, {3}});
        REQUIRE(basis.size() == 3);
        CHECK(basis[0].at({0}) == 3);
        CHECK(basis[0].at({1}) == Rational(-5, 2));
        CHECK(basis[0].at({2}) == Rational(1, 2));
        CHECK(basis[1].at({0}) == -3);
        CHECK(basis[1].at({1}) == 4);
        CHECK(basis[1].at({2}) == -1);
        CHECK(basis[2].at({0}) == 1);
        CHECK(basis[2].at({1}) == Rational(-3, 2));
        CHECK(basis[2].at({2}) == Rational(1, 2));
    }
    SECTION("Kronecker property in two variables") {
        std::vector<std::vector<long>> nodes{{0, 1}, {1, 0}, {1, 1}};
        auto basis = lagrange_basis(nodes);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j)
                CHECK(sparse_eval(basis[i], nodes[j]) == (i == j ? 1 : 0));
    }
    SECTION("bad node sets") {
        CHECK_THROWS_MATCHES(lagrange_basis({}), Error,
                             testutil::HasKind(ErrorKind::ValidationError));
        CHECK_THROWS_MATCHES(lagrange_basis({{1}, {1}}), Error,
                             testutil::HasKind(ErrorKind::ValidationError));
    }
}

TEST_CASE("node weight solver") {
    SECTION("determined system") {
        auto w = detail::solve_node_weights({{1}, {2}}, {{0}, {1}}, {Rational(3), Rational(5)});
        REQUIRE(w.size() == 2);
        CHECK(w[0] == 1);
        CHECK(w[1] == 2);
    }
    SECTION("underdetermined system") {
        CHECK_THROWS_MATCHES(detail::solve_node_weights({{1}, {2}}, {{1}}, {Rational(3)}), Error,
                             testutil::HasKind(ErrorKind::CheckFailure));
    }
    SECTION("inconsistent system") {
        CHECK_THROWS_MATCHES(detail::solve_node_weights({{1}}, {{0}, {1}, {2}},
                                                        {Rational(1), Rational(2), Rational(3)}),
                             Error, testutil::HasKind(ErrorKind::CheckFailure));
    }
}

TEST_CASE("number extraction on the plane") {
    FanoModel m = builtin("P2");
    InitialData init{{{1, 2}, BigInt(1)}};
    BasePoint b = default_base(m);
    SolutionJet sol = propagate(m, b, init, 8);

    SECTION("first three counts") {
        GWTable t = extract(m, sol, init, {{1, 2}, {2, 5}, {3, 8}});
        CHECK(t.entries.at({1, 2}) == 1);
        CHECK(t.entries.at({2, 5}) == 1);
        CHECK(t.entries.at({3, 8}) == 12);
        CHECK(t.warnings.empty());
    }
    SECTION("cross-check off gives the same values") {
        GWTable t = extract(m, sol, init, {{2, 5}, {3, 8}}, false);
        CHECK(t.entries.at({2, 5}) == 1);
        CHECK(t.entries.at({3, 8}) == 12);
    }
    SECTION("duplicate targets collapse") {
        GWTable t = extract(m, sol, init, {{1, 2}, {1, 2}});
        CHECK(t.entries.size() == 1);
    }
    SECTION("insufficient order names the requirement") {
        SolutionJet low = propagate(m, b, init, 3);
        try {
            extract(m, low, init, {{3, 8}});
            FAIL("expected InsufficientJetOrder");
        } catch (const Error& e) {
            CHECK(e.kind == ErrorKind::InsufficientJetOrder);
            CHECK(e.detail == 6);
        }
    }
    SECTION("grading diagnostics") {
        try {
            extract(m, sol, init, {{0, 0}});
            FAIL("expected GradingError");
        } catch (const Error& e) {
            CHECK(e.kind == ErrorKind::GradingError);
            CHECK(std::string(e.what()).find("zero curve class") != std::string::npos);
        }
        try {
            extract(m, sol, init, {{1, 1}});
            FAIL("expected GradingError");
        } catch (const Error& e) {
            CHECK(e.kind == ErrorKind::GradingError);
            CHECK(std::string(e.what()).find("degree constraint") != std::string::npos);
        }
    }
    SECTION("target arity") {
        CHECK_THROWS_MATCHES(extract(m, sol, init, {{1}}), Error,
                             testutil::HasKind(ErrorKind::DimensionMismatch));
    }
}

TEST_CASE("extraction without jet access reads the initial data") {
    FanoModel m = builtin("P1");
    InitialData init{{{1}, BigInt(1)}};
    SolutionJet sol = propagate(m, default_base(m), init, 2);

    GWTable t = extract(m, sol, init, {{1}});
    CHECK(t.entries.at({1}) == 1);
    CHECK(t.warnings.empty());

    GWTable missing = extract(m, sol, InitialData{}, {{1}});
    CHECK(missing.entries.at({1}) == 0);
    REQUIRE_FALSE(missing.warnings.empty());
    CHECK(missing.warnings[0].find("using 0") != std::string::npos);
}

TEST_CASE("inconsistent seeds produce non-integer values with a warning") {
    FanoModel m = builtin("P2");
    // start from y_22 = 7/5, which is no enumerative seed at q = 1
    MatQ y0(2, 2);
    y0.at(1, 1) = Rational(7, 5);
    SolutionJet sol = propagate(m, default_base(m), y0, 2);
    GWTable t = extract(m, sol, InitialData{}, {{1, 2}});
    CHECK(t.entries.at({1, 2}) == Rational(7, 5));
    REQUIRE_FALSE(t.warnings.empty());
    CHECK(t.warnings[0].find("non-integer") != std::string::npos);
}

TEST_CASE("degree-bounded target lists") {
    // the line carries a single graded class: 2k = 3 - 1 forces k = 1
    CHECK(targets_by_degree(builtin("P1"), 4) == std::vector<GWKey>{{1}});
    CHECK(targets_by_degree(builtin("P2"), 3) ==
          std::vector<GWKey>{{1, 2}, {2, 5}, {3, 8}});
    CHECK(targets_by_degree(builtin("P3"), 2) ==
          std::vector<GWKey>{{1, 0, 2},
                             {1, 2, 1},
                             {1, 4, 0},
                             {2, 0, 4},
                             {2, 2, 3},
                             {2, 4, 2},
                             {2, 6, 1},
                             {2, 8, 0}});
    CHECK(targets_by_degree(builtin("P2"), 0).empty());
}

TEST_CASE("table serialization") {
    GWTable t;
    t.model = "P2";
    t.base = default_base(builtin("P2"));
    t.order = 2;
    t.entries.emplace(GWKey{1, 2}, Rational(1));
    t.entries.emplace(GWKey{2, 5}, Rational(1));
    CHECK(gwtable_tsv(t) ==
          "# model P2\n"
          "# xi 0 0\n"
          "# q 1\n"
          "# order 2\n"
          "# columns k1 k2 N\n"
          "1\t2\t1\n"
          "2\t5\t1\n");
}

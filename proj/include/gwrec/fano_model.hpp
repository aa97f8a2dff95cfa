#pragma once

#include "linalg_q.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gwrec {

/* Combinatorial input data of a Fano variety with (p,p)-type even
 * cohomology: basis classes h_0..h_sigma with h_0 the unit, Hodge degrees
 * p_alpha, triple intersection numbers, and the anticanonical class
 * written in the degree-1 part of the basis.
 *
 * Index conventions used throughout the engine:
 *   - alpha, beta, gamma run over 0..sigma (full basis),
 *   - a, b, c run over 1..sigma (coordinate directions); containers indexed
 *     by directions are 0-based of length sigma, slot i <-> direction i+1.
 */
struct FanoModel {
    std::string name;
    int n = 0;     // complex dimension
    int sigma = 0; // basis size minus one
    int rho = 0;   // number of degree-1 (divisor) classes
    std::vector<int> p;            // size sigma+1, weakly increasing
    std::vector<long long> c;      // size sigma+1; anticanonical coefficients
    std::vector<long long> g3;     // dense (sigma+1)^3 symmetric tensor

    // derived by validate():
    bool validated = false;
    MatQ metric;                   // g_{ab} = g_{0ab}
    MatQ metric_inv;
    std::vector<long long> c2;     // c_{ab} = sum_g g_{abg} c_g, dense (sigma+1)^2

    long long& g3_at(int a, int b, int g) {
        return g3[(static_cast<std::size_t>(a) * (sigma + 1) + b) * (sigma + 1) + g];
    }
    long long g3_at(int a, int b, int g) const {
        return g3[(static_cast<std::size_t>(a) * (sigma + 1) + b) * (sigma + 1) + g];
    }
    void set_g3(int a, int b, int g, long long v) {
        int idx[3] = {a, b, g};
        std::sort(idx, idx + 3);
        do {
            g3_at(idx[0], idx[1], idx[2]) = v;
        } while (std::next_permutation(idx, idx + 3));
    }

    long long c2_at(int a, int b) const { return c2[static_cast<std::size_t>(a) * (sigma + 1) + b]; }

    // Euler pairing weight 1 - n + p_a + p_b
    int k_weight(int a, int b) const { return 1 - n + p[a] + p[b]; }
};

// Coefficient description of the Euler vector field: E_a(x) = c_a + (1-p_a) x_a.
struct EulerField {
    std::vector<long long> constant; // c_a, directions 1..sigma
    std::vector<int> linear;         // 1 - p_a
};

inline EulerField euler_field(const FanoModel& m) {
    EulerField e;
    for (int a = 1; a <= m.sigma; ++a) {
        e.constant.push_back(m.c[a]);
        e.linear.push_back(1 - m.p[a]);
    }
    return e;
}

struct ValidationReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    std::string joined() const {
        std::string s;
        for (const auto& f : failures) s += f + "\n";
        return s;
    }
};

/* Checks the model axioms and fills the derived fields (metric, its
 * inverse, c2). Returns the list of violated rules; the model is marked
 * validated only if empty. */
inline ValidationReport validate(FanoModel& m) {
    ValidationReport rep;
    auto fail = [&](const std::string& s) {
        for (const auto& f : rep.failures)
            if (f == s) return;
        rep.failures.push_back(s);
    };

    if (m.sigma < 1) fail("sigma must be at least 1");
    if (m.n < 1) fail("dim must be at least 1");
    if (m.rho < 1 || m.rho > m.sigma) fail("rho must lie in 1..sigma");
    if (static_cast<int>(m.p.size()) != m.sigma + 1) fail("p must list sigma+1 degrees");
    if (static_cast<int>(m.c.size()) != m.sigma + 1) fail("c must list sigma+1 coefficients");
    if (m.g3.size() != static_cast<std::size_t>(m.sigma + 1) * (m.sigma + 1) * (m.sigma + 1))
        fail("g tensor has wrong size");
    if (!rep.ok()) return rep;

    if (m.p[0] != 0) fail("p_0 must be 0 (unit class)");
    for (int i = 1; i <= m.sigma; ++i)
        if (m.p[i] < m.p[i - 1]) fail("degrees p must be weakly increasing");
    for (int a = 1; a <= m.rho; ++a)
        if (m.p[a] != 1) fail("divisor slots 1..rho must have degree 1");
    for (int a = m.rho + 1; a <= m.sigma; ++a)
        if (m.p[a] < 2) fail("non-divisor slots must have degree >= 2");
    if (m.sigma >= 1 && m.p[m.sigma] > m.n) fail("degrees cannot exceed dim");

    for (int a = 0; a <= m.sigma; ++a)
        for (int b = 0; b <= m.sigma; ++b)
            for (int g = 0; g <= m.sigma; ++g) {
                long long v = m.g3_at(a, b, g);
                if (v != m.g3_at(a, g, b) || v != m.g3_at(b, a, g))
                    fail("g tensor is not symmetric");
                if (v != 0 && m.p[a] + m.p[b] + m.p[g] != m.n)
                    fail("g tensor violates the degree selection rule");
            }
    if (!rep.ok()) return rep;

    // anticanonical class lives in degree 1 with positive multiplicities
    if (m.c[0] != 0) fail("c_0 must be 0");
    for (int a = m.rho + 1; a <= m.sigma; ++a)
        if (m.c[a] != 0) fail("c must vanish outside the divisor slots");
    for (int a = 1; a <= m.rho; ++a)
        if (m.c[a] <= 0) fail("c must be positive on every divisor slot (finiteness condition)");

    MatQ g(m.sigma + 1, m.sigma + 1);
    for (int a = 0; a <= m.sigma; ++a)
        for (int b = 0; b <= m.sigma; ++b) g.at(a, b) = m.g3_at(0, a, b);
    if (g.det() == 0) fail("metric g_{0ab} is degenerate");

    if (!rep.ok()) return rep;

    m.metric = g;
    m.metric_inv = g.inverse();
    m.c2.assign(static_cast<std::size_t>(m.sigma + 1) * (m.sigma + 1), 0);
    for (int a = 0; a <= m.sigma; ++a)
        for (int b = 0; b <= m.sigma; ++b) {
            long long s = 0;
            for (int gma = 0; gma <= m.sigma; ++gma) s += m.g3_at(a, b, gma) * m.c[gma];
            m.c2[static_cast<std::size_t>(a) * (m.sigma + 1) + b] = s;
        }
    m.validated = true;
    return rep;
}

inline FanoModel make_validated(FanoModel m) {
    auto rep = validate(m);
    if (!rep.ok())
        throw Error(ErrorKind::ValidationError, "invalid model '" + m.name + "':\n" + rep.joined());
    return m;
}

/* Projective space P^n: basis 1, H, ..., H^n; all triple intersections
 * with degree sum n equal 1; anticanonical class (n+1)H. */
inline FanoModel builtin_pn(int n) {
    if (n < 1) throw Error(ErrorKind::ValidationError, "Pn needs n >= 1");
    FanoModel m;
    m.name = "P" + std::to_string(n);
    m.n = n;
    m.sigma = n;
    m.rho = 1;
    m.p.resize(n + 1);
    for (int i = 0; i <= n; ++i) m.p[i] = i;
    m.c.assign(n + 1, 0);
    m.c[1] = n + 1;
    m.g3.assign(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1), 0);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int g = 0; g <= n; ++g)
                if (a + b + g == n) m.g3_at(a, b, g) = 1;
    return make_validated(m);
}

inline FanoModel builtin(const std::string& name, std::optional<int> n = std::nullopt) {
    if (name == "P1") return builtin_pn(1);
    if (name == "P2") return builtin_pn(2);
    if (name == "Pn") {
        if (!n) throw Error(ErrorKind::ValidationError, "builtin Pn requires n");
        return builtin_pn(*n);
    }
    // convenience: P<k>
    if (name.size() > 1 && name[0] == 'P') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits) return builtin_pn(std::stoi(name.substr(1)));
    }
    throw Error(ErrorKind::ValidationError, "unknown builtin model: " + name);
}

namespace detail {
inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}
inline long long parse_ll(const std::string& s, int lineno) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(lineno) + ": expected an integer, got '" + s + "'");
    }
}
} // namespace detail

/* Parses the line-oriented model format:
 *   name <string>
 *   dim <n>
 *   sigma <s>
 *   rho <r>
 *   p <p_0> ... <p_sigma>
 *   c <c_0> ... <c_sigma>
 *   g <alpha> <beta> <gamma> <value>     (one line per nonzero triple,
 *                                         indices in canonical order a<=b<=g)
 * '#' starts a comment. Unknown keys, duplicate scalars, and conflicting
 * or repeated g entries are errors. The parsed model is validated. */
inline FanoModel parse_model(const std::string& text) {
    FanoModel m;
    bool have_name = false, have_dim = false, have_sigma = false, have_rho = false;
    bool have_p = false, have_c = false;
    std::vector<std::array<int, 3>> g_seen;
    std::vector<long long> g_vals;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        auto dup = [&](bool seen, const char* what) {
            if (seen)
                throw Error(ErrorKind::ConflictError,
                            "line " + std::to_string(lineno) + ": duplicate " + what);
        };
        if (key == "name") {
            dup(have_name, "name");
            if (toks.size() != 2)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": name needs one token");
            m.name = toks[1];
            have_name = true;
        } else if (key == "dim") {
            dup(have_dim, "dim");
            if (toks.size() != 2)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": dim needs one integer");
            m.n = static_cast<int>(detail::parse_ll(toks[1], lineno));
            have_dim = true;
        } else if (key == "sigma") {
            dup(have_sigma, "sigma");
            if (toks.size() != 2)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": sigma needs one integer");
            m.sigma = static_cast<int>(detail::parse_ll(toks[1], lineno));
            have_sigma = true;
        } else if (key == "rho") {
            dup(have_rho, "rho");
            if (toks.size() != 2)
                throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": rho needs one integer");
            m.rho = static_cast<int>(detail::parse_ll(toks[1], lineno));
            have_rho = true;
        } else if (key == "p") {
            dup(have_p, "p");
            for (std::size_t i = 1; i < toks.size(); ++i)
                m.p.push_back(static_cast<int>(detail::parse_ll(toks[i], lineno)));
            have_p = true;
        } else if (key == "c") {
            dup(have_c, "c");
            for (std::size_t i = 1; i < toks.size(); ++i)
                m.c.push_back(detail::parse_ll(toks[i], lineno));
            have_c = true;
        } else if (key == "g") {
            if (toks.size() != 5)
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": g needs three indices and a value");
            int a = static_cast<int>(detail::parse_ll(toks[1], lineno));
            int b = static_cast<int>(detail::parse_ll(toks[2], lineno));
            int g = static_cast<int>(detail::parse_ll(toks[3], lineno));
            long long v = detail::parse_ll(toks[4], lineno);
            if (!(0 <= a && a <= b && b <= g))
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": g indices must satisfy 0 <= a <= b <= g");
            for (std::size_t i = 0; i < g_seen.size(); ++i)
                if (g_seen[i] == std::array<int, 3>{a, b, g}) {
                    if (g_vals[i] != v)
                        throw Error(ErrorKind::ConflictError,
                                    "line " + std::to_string(lineno) + ": conflicting duplicate g entry");
                    throw Error(ErrorKind::ConflictError,
                                "line " + std::to_string(lineno) + ": repeated g entry");
                }
            g_seen.push_back({a, b, g});
            g_vals.push_back(v);
        } else {
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_name) throw Error(ErrorKind::ParseError, "missing name");
    if (!have_dim) throw Error(ErrorKind::ParseError, "missing dim");
    if (!have_sigma) throw Error(ErrorKind::ParseError, "missing sigma");
    if (!have_rho) throw Error(ErrorKind::ParseError, "missing rho");
    if (!have_p) throw Error(ErrorKind::ParseError, "missing p");
    if (!have_c) throw Error(ErrorKind::ParseError, "missing c");
    if (m.sigma < 1) throw Error(ErrorKind::ParseError, "sigma must be at least 1");

    m.g3.assign(static_cast<std::size_t>(m.sigma + 1) * (m.sigma + 1) * (m.sigma + 1), 0);
    for (std::size_t i = 0; i < g_seen.size(); ++i) {
        auto [a, b, g] = g_seen[i];
        if (g > m.sigma)
            throw Error(ErrorKind::ParseError, "g index out of range 0..sigma");
        m.set_g3(a, b, g, g_vals[i]);
    }

    auto rep = validate(m);
    if (!rep.ok())
        throw Error(ErrorKind::ValidationError, "invalid model '" + m.name + "':\n" + rep.joined());
    return m;
}

inline std::string serialize_model(const FanoModel& m) {
    std::ostringstream os;
    os << "name " << m.name << "\n";
    os << "dim " << m.n << "\n";
    os << "sigma " << m.sigma << "\n";
    os << "rho " << m.rho << "\n";
    os << "p";
    for (int v : m.p) os << " " << v;
    os << "\nc";
    for (long long v : m.c) os << " " << v;
    os << "\n";
    for (int a = 0; a <= m.sigma; ++a)
        for (int b = a; b <= m.sigma; ++b)
            for (int g = b; g <= m.sigma; ++g)
                if (m.g3_at(a, b, g) != 0)
                    os << "g " << a << " " << b << " " << g << " " << m.g3_at(a, b, g) << "\n";
    return os.str();
}

} // namespace gwrec

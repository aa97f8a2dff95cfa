#pragma once

#include "jet_integrator.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace gwrec {

// polynomial in the rho divisor directions, monomial exponents -> coefficient
using SparsePoly = std::map<std::vector<long>, Rational>;

inline Rational sparse_eval(const SparsePoly& p, const std::vector<long>& pt) {
    Rational acc(0);
    for (const auto& [mono, c] : p) {
        Rational t = c;
        for (std::size_t i = 0; i < mono.size(); ++i) t *= rational_pow(Rational(pt[i]), mono[i]);
        acc += t;
    }
    return acc;
}

/* Kronecker basis on a finite node set in Z^rho: P_l picks, for every other
 * node, the first coordinate where they differ and vanishes there. Each P_l
 * has total degree (#nodes - 1). */
inline std::vector<SparsePoly> lagrange_basis(const std::vector<std::vector<long>>& nodes) {
    if (nodes.empty())
        throw Error(ErrorKind::ValidationError, "lagrange_basis: empty node set");
    {
        std::set<std::vector<long>> seen(nodes.begin(), nodes.end());
        if (seen.size() != nodes.size())
            throw Error(ErrorKind::ValidationError, "lagrange_basis: duplicate interpolation nodes");
    }
    const std::size_t rho = nodes[0].size();
    std::vector<SparsePoly> basis;
    for (const auto& l : nodes) {
        SparsePoly p{{std::vector<long>(rho, 0), Rational(1)}};
        for (const auto& l2 : nodes) {
            if (l2 == l) continue;
            std::size_t a = 0;
            while (l[a] == l2[a]) ++a;
            Rational inv = Rational(1) / Rational(l[a] - l2[a]);
            SparsePoly np;
            for (const auto& [mono, c] : p) {
                Rational w = c * inv;
                auto up = mono;
                up[a] += 1;
                np[up] += w;
                np[mono] -= w * l2[a];
            }
            p = std::move(np);
        }
        for (auto it = p.begin(); it != p.end();)
            it = it->second == 0 ? p.erase(it) : std::next(it);
        basis.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (sparse_eval(basis[i], nodes[j]) != Rational(i == j ? 1 : 0))
                throw Error(ErrorKind::CheckFailure,
                            "lagrange_basis: Kronecker property failed");
    return basis;
}

struct GWTable {
    std::string model;
    BasePoint base;
    int order = 0;
    std::map<GWKey, Rational> entries;
    std::vector<std::string> warnings;
};

namespace detail {

/* Independent route to the same numbers: the derivatives indexed by the
 * union of basis monomials form a linear system V^T w = rhs in the unknowns
 * w_k = q^k N_k. Solved by elimination and verified on every equation, it
 * must reproduce the interpolation result. */
inline std::vector<Rational> solve_node_weights(const std::vector<std::vector<long>>& nodes,
                                                const std::vector<std::vector<long>>& monos,
                                                const std::vector<Rational>& rhs) {
    const std::size_t rows = monos.size(), cols = nodes.size();
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            Rational v(1);
            for (std::size_t t = 0; t < monos[i].size(); ++t)
                v *= rational_pow(Rational(nodes[j][t]), monos[i][t]);
            a[i][j] = std::move(v);
        }
        a[i][cols] = rhs[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_row(cols, rows);
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pr = row;
        while (pr < rows && a[pr][col] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(a[row], a[pr]);
        Rational inv = Rational(1) / a[row][col];
        for (std::size_t j = col; j <= cols; ++j) a[row][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (std::size_t j = col; j <= cols; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_row[col] = row++;
    }
    for (std::size_t col = 0; col < cols; ++col)
        if (pivot_row[col] == rows)
            throw Error(ErrorKind::CheckFailure,
                        "cross-check: derivative system does not determine the node weights");
    for (std::size_t i = row; i < rows; ++i)
        if (a[i][cols] != 0)
            throw Error(ErrorKind::CheckFailure,
                        "cross-check: derivative system is inconsistent");
    std::vector<Rational> w(cols);
    for (std::size_t col = 0; col < cols; ++col) w[col] = a[pivot_row[col]][cols];
    return w;
}

} // namespace detail

/* Reads GW numbers off a propagated solution. Targets with at most one
 * non-divisor insertion never reach the jet (their derivative order is
 * below 2) and come from the initial data. All others go through the
 * interpolation identity
 *   q^l N_l = sum_m a_{l,m} d^{(m,suffix)} f
 * with {a_{l,m}} the Kronecker basis coefficients over the curve classes
 * the grading allows, cross-checked against the eliminated linear system
 * unless disabled. */
inline GWTable extract(const FanoModel& m, const SolutionJet& sol, const InitialData& init,
                       const std::vector<GWKey>& targets, bool cross_check = true) {
    if (!m.validated)
        throw Error(ErrorKind::ValidationError, "extract: model not validated");
    GWTable table;
    table.model = m.name;
    table.base = sol.base;
    table.order = sol.order;
    const int w_len = m.sigma - m.rho;
    for (const auto& key : targets) {
        if (static_cast<int>(key.size()) != m.sigma)
            throw Error(ErrorKind::DimensionMismatch,
                        "extract: target " + key_str(key) + " has wrong arity");
        if (!grading_holds(m, key)) {
            bool zero_class = true;
            for (int a = 0; a < m.rho; ++a)
                if (key[a] != 0) zero_class = false;
            throw Error(ErrorKind::GradingError,
                        zero_class ? "extract: target " + key_str(key) + " has zero curve class"
                                   : "extract: target " + key_str(key) +
                                         " violates the degree constraint");
        }
        if (table.entries.count(key)) continue;
        const long w = nondivisor_total(m, key);
        if (w <= 1) {
            auto it = init.find(key);
            if (it == init.end()) {
                table.warnings.push_back("missing initial datum N" + key_str(key) + ", using 0");
                table.entries.emplace(key, Rational(0));
            } else {
                table.entries.emplace(key, Rational(it->second));
            }
            continue;
        }
        std::vector<long> suffix(key.begin() + m.rho, key.end());
        std::vector<long> l(key.begin(), key.begin() + m.rho);
        auto nodes = solve_grading(m, suffix);
        std::size_t li = nodes.size();
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == l) li = i;
        if (li == nodes.size())
            throw Error(ErrorKind::GradingError,
                        "extract: target " + key_str(key) + " is not among the graded classes");
        auto basis = lagrange_basis(nodes);

        long max_deg = 0;
        for (const auto& p : basis)
            for (const auto& [mono, c] : p) {
                long d = 0;
                for (long e : mono) d += e;
                max_deg = std::max(max_deg, d);
            }
        const long required = max_deg + w - 2;
        if (required > sol.order)
            throw Error(ErrorKind::InsufficientJetOrder,
                        "extract: target " + key_str(key) + " needs jet order " +
                            std::to_string(required) + ", solution has " +
                            std::to_string(sol.order),
                        required);

        auto deriv = [&](const std::vector<long>& mono) {
            std::vector<long> idx = mono;
            idx.insert(idx.end(), suffix.begin(), suffix.end());
            return jet_f_derivative(m, sol, idx);
        };
        Rational acc(0);
        for (const auto& [mono, c] : basis[li]) acc += c * deriv(mono);
        Rational value = acc / detail::q_weight(sol.base, l);

        if (cross_check) {
            std::set<std::vector<long>> support;
            for (const auto& p : basis)
                for (const auto& [mono, c] : p) support.insert(mono);
            std::vector<std::vector<long>> monos(support.begin(), support.end());
            std::vector<Rational> rhs;
            for (const auto& mono : monos) rhs.push_back(deriv(mono));
            auto weights = detail::solve_node_weights(nodes, monos, rhs);
            Rational check = weights[li] / detail::q_weight(sol.base, l);
            if (check != value)
                throw Error(ErrorKind::CheckFailure,
                            "extract: cross-check mismatch for target " + key_str(key));
        }
        if (!is_integer(value))
            table.warnings.push_back("non-integer value for N" + key_str(key) + ": " +
                                     to_string(value));
        table.entries.emplace(key, std::move(value));
    }
    return table;
}

/* All grading-compatible keys whose curve class has total multi-degree in
 * [1, maxdeg], sorted. */
inline std::vector<GWKey> targets_by_degree(const FanoModel& m, long maxdeg) {
    std::vector<GWKey> out;
    std::vector<long> k(m.rho, 0);
    std::vector<long> suf(m.sigma - m.rho, 0);
    auto suffixes = [&](auto&& self, int b, long long srem) -> void {
        if (b == m.sigma - m.rho) {
            if (srem == 0) {
                GWKey key = k;
                key.insert(key.end(), suf.begin(), suf.end());
                out.push_back(std::move(key));
            }
            return;
        }
        long wb = m.p[m.rho + 1 + b] - 1;
        for (long v = 0; v * wb <= srem; ++v) {
            suf[b] = v;
            self(self, b + 1, srem - v * wb);
        }
        suf[b] = 0;
    };
    auto divisors = [&](auto&& self, int a, long rem) -> void {
        if (a == m.rho) {
            if (rem == maxdeg) return; // sum must be >= 1
            long long rhs = m.n - 3;
            for (int i = 0; i < m.rho; ++i) rhs += k[i] * m.c[i + 1];
            if (rhs >= 0) suffixes(suffixes, 0, rhs);
            return;
        }
        for (long v = 0; v <= rem; ++v) {
            k[a] = v;
            self(self, a + 1, rem - v);
        }
        k[a] = 0;
    };
    divisors(divisors, 0, maxdeg);
    std::sort(out.begin(), out.end());
    return out;
}

/* Tab-separated table: '#' header lines carry the model, base point and jet
 * order, then one row per number. Exact rationals throughout. */
inline std::string gwtable_tsv(const GWTable& t) {
    std::ostringstream os;
    os << "# model " << t.model << "\n";
    os << "# xi";
    for (const auto& v : t.base.xi) os << " " << to_string(v);
    os << "\n# q";
    for (const auto& v : t.base.q) os << " " << to_string(v);
    os << "\n# order " << t.order << "\n";
    os << "# columns";
    for (std::size_t i = 1; i <= (t.entries.empty() ? 0 : t.entries.begin()->first.size()); ++i)
        os << " k" << i;
    os << " N\n";
    for (const auto& [key, val] : t.entries) {
        for (long x : key) os << x << "\t";
        os << to_string(val) << "\n";
    }
    return os.str();
}

} // namespace gwrec

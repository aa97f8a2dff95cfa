#pragma once

#include "fano_model.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace gwrec {

/* A GW number is keyed by its full multiplicity vector (k_1..k_sigma):
 * divisor-class multiplicities on the first rho slots, insertion
 * multiplicities of the higher classes after them. */
using GWKey = std::vector<long>;
using InitialData = std::map<GWKey, BigInt>;

inline std::string key_str(const GWKey& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(k[i]);
    }
    return s + ")";
}

/* Degree constraint on the divisor multiplicities for a fixed non-divisor
 * part: sum_a k_a c_a = sum_{b>rho} m_b (p_b - 1) + 3 - n. Returns all
 * solutions in lexicographic order. The zero vector is excluded: it is not
 * a curve class and the generating series carries no such term. Positivity
 * of c on the divisor slots (checked by validate) makes the set finite. */
inline std::vector<std::vector<long>> solve_grading(const FanoModel& m,
                                                    const std::vector<long>& m_part) {
    if (static_cast<int>(m_part.size()) != m.sigma - m.rho)
        throw Error(ErrorKind::DimensionMismatch,
                    "solve_grading: non-divisor multi-index has wrong arity");
    for (int a = 1; a <= m.rho; ++a)
        if (m.c[a] <= 0)
            throw Error(ErrorKind::UnboundedInitialSet,
                        "solve_grading: c_" + std::to_string(a) +
                            " <= 0 makes the class set unbounded");
    long long rhs = 3 - m.n;
    for (int i = 0; i < m.sigma - m.rho; ++i) {
        if (m_part[i] < 0)
            throw Error(ErrorKind::DimensionMismatch, "solve_grading: negative multiplicity");
        rhs += m_part[i] * (m.p[m.rho + 1 + i] - 1);
    }
    std::vector<std::vector<long>> out;
    if (rhs <= 0) return out;
    std::vector<long> k(m.rho, 0);
    auto rec = [&](auto&& self, int a, long long rem) -> void {
        if (a == m.rho) {
            if (rem == 0) out.push_back(k);
            return;
        }
        long long ca = m.c[a + 1];
        for (long v = 0; v * ca <= rem; ++v) {
            k[a] = v;
            self(self, a + 1, rem - v * ca);
        }
        k[a] = 0;
    };
    rec(rec, 0, rhs);
    return out;
}

// True when the key satisfies the degree constraint with a nonzero divisor part.
inline bool grading_holds(const FanoModel& m, const GWKey& key) {
    if (static_cast<int>(key.size()) != m.sigma) return false;
    long long lhs = 0, rhs = 3 - m.n, div_total = 0;
    for (int a = 1; a <= m.sigma; ++a) {
        if (key[a - 1] < 0) return false;
        if (a <= m.rho) {
            lhs += key[a - 1] * m.c[a];
            div_total += key[a - 1];
        } else {
            rhs += key[a - 1] * (m.p[a] - 1);
        }
    }
    return div_total > 0 && lhs == rhs;
}

inline long nondivisor_total(const FanoModel& m, const GWKey& key) {
    long t = 0;
    for (int a = m.rho + 1; a <= m.sigma; ++a) t += key[a - 1];
    return t;
}

/* The finitely many numbers the differential system cannot determine: at
 * most two insertions of non-divisor classes. Shapes of the non-divisor
 * part: empty, one slot once, two distinct slots once each, one slot
 * twice. Returned sorted. */
inline std::vector<GWKey> initial_classes(const FanoModel& m) {
    std::vector<std::vector<long>> suffixes;
    const int w = m.sigma - m.rho;
    suffixes.emplace_back(w, 0);
    for (int i = 0; i < w; ++i) {
        std::vector<long> s(w, 0);
        s[i] = 1;
        suffixes.push_back(s);
        s[i] = 2;
        suffixes.push_back(s);
    }
    for (int i = 0; i < w; ++i)
        for (int j = i + 1; j < w; ++j) {
            std::vector<long> s(w, 0);
            s[i] = s[j] = 1;
            suffixes.push_back(s);
        }
    std::vector<GWKey> keys;
    for (const auto& suf : suffixes)
        for (const auto& k : solve_grading(m, suf)) {
            GWKey key = k;
            key.insert(key.end(), suf.begin(), suf.end());
            keys.push_back(key);
        }
    std::sort(keys.begin(), keys.end());
    return keys;
}

inline bool is_initial_class(const FanoModel& m, const GWKey& key) {
    return grading_holds(m, key) && nondivisor_total(m, key) <= 2;
}

/* Initial-data file format: one datum per line,
 *   N <k_1> ... <k_sigma> = <integer>
 * with '#' comments. Keys must be initial classes of the model; duplicates
 * conflict. */
inline InitialData parse_initial_data(const std::string& text, const FanoModel& m) {
    InitialData data;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        auto err = [&](const std::string& what) {
            return Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + what);
        };
        if (toks[0] != "N") throw err("expected 'N', got '" + toks[0] + "'");
        if (static_cast<int>(toks.size()) != m.sigma + 3)
            throw err("expected N <" + std::to_string(m.sigma) + " multiplicities> = <integer>");
        if (toks[m.sigma + 1] != "=") throw err("expected '=' before the value");
        GWKey key;
        for (int i = 0; i < m.sigma; ++i) {
            long v = static_cast<long>(detail::parse_ll(toks[1 + i], lineno));
            if (v < 0) throw err("multiplicities must be nonnegative");
            key.push_back(v);
        }
        BigInt val;
        try {
            val = BigInt(toks[m.sigma + 2]);
        } catch (const std::exception&) {
            throw err("bad integer value '" + toks[m.sigma + 2] + "'");
        }
        if (!is_initial_class(m, key))
            throw Error(ErrorKind::ValidationError,
                        "line " + std::to_string(lineno) + ": " + key_str(key) +
                            " is not an initial class of model " + m.name);
        if (data.count(key))
            throw Error(ErrorKind::ConflictError,
                        "line " + std::to_string(lineno) + ": duplicate initial datum for " +
                            key_str(key));
        data.emplace(std::move(key), std::move(val));
    }
    return data;
}

inline std::string serialize_initial_data(const InitialData& data) {
    std::ostringstream os;
    for (const auto& [k, v] : data) {
        os << "N";
        for (long x : k) os << " " << x;
        os << " = " << v.str() << "\n";
    }
    return os.str();
}

} // namespace gwrec

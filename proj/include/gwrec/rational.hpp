#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace gwrec {

using BigInt = boost::multiprecision::cpp_int;
// Exact arbitrary-precision rational, kept normalized (reduced, positive
// denominator) by the backend after every operation.
using Rational = boost::multiprecision::cpp_rational;

enum class ErrorKind {
    DimensionMismatch,
    NonInvertibleJet,
    DegenerateFrame,
    NonTameBasePoint,
    UnboundedInitialSet,
    IntegrabilityFailure,
    InsufficientJetOrder,
    ParseError,
    ValidationError,
    ConflictError,
    GradingError,
    CheckFailure,
};

struct Error : std::runtime_error {
    ErrorKind kind;
    // extra payload, e.g. the jet order a failed extraction would need
    long detail = -1;
    Error(ErrorKind k, const std::string& msg, long d = -1)
        : std::runtime_error(msg), kind(k), detail(d) {}
};

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline std::string to_string(const Rational& r) { return r.str(); }

// Accepts "7", "-3/4", "+9/2". Rejects everything else (incl. whitespace).
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw Error(ErrorKind::ParseError, "empty rational literal");
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    bool digits = false, slash = false;
    std::size_t slash_at = 0;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (slash || !digits) throw Error(ErrorKind::ParseError, "bad rational literal: " + s);
            slash = true;
            slash_at = j;
            digits = false;
        } else if (s[j] >= '0' && s[j] <= '9') {
            digits = true;
        } else {
            throw Error(ErrorKind::ParseError, "bad rational literal: " + s);
        }
    }
    if (!digits) throw Error(ErrorKind::ParseError, "bad rational literal: " + s);
    const std::string core = s[0] == '+' ? s.substr(1) : s; // BigInt rejects a leading '+'
    if (!slash) return Rational(BigInt(core));
    if (s[0] == '+') --slash_at;
    BigInt num(core.substr(0, slash_at));
    BigInt den(core.substr(slash_at + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator: " + s);
    return Rational(num, den);
}

inline BigInt binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline BigInt factorial(long n) {
    BigInt r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace gwrec

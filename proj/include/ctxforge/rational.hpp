#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "ctxforge/errors.hpp"

namespace ctxforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rational r{BigInt(num)};
    r /= BigInt(den);
    return r;
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "p/q", "p", "-p/q"; surrounding whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
    auto digits = [&](std::string_view s, std::size_t offset) {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) throw SyntaxError(offset + i, "expected digits in rational");
        for (std::size_t k = i; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9') throw SyntaxError(offset + k, "unexpected character in rational");
        }
        std::string body(s.substr(i));
        body.erase(0, std::min(body.find_first_not_of('0'), body.size() - 1));
        return i == 1 && s[0] == '-' ? BigInt(-BigInt(body)) : BigInt(body);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational{digits(text, 0)};
    BigInt num = digits(text.substr(0, slash), 0);
    BigInt den = digits(text.substr(slash + 1), slash + 1);
    if (den == 0) throw DivisionByZero("rational with zero denominator");
    Rational r{num};
    r /= den;
    return r;
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline BigInt lcm_of_denominators(const std::vector<Rational>& values) {
    BigInt l = 1;
    for (const auto& v : values) {
        BigInt d = denominator_of(v);
        l = l / boost::multiprecision::gcd(l, d) * d;
    }
    return l;
}

// Best rational approximation with denominator <= max_den (continued fractions).
inline Rational rationalize(double x, std::int64_t max_den = 1000000) {
    if (!std::isfinite(x)) throw NonFiniteValue("cannot rationalize a non-finite value");
    const bool neg = x < 0;
    double v = std::fabs(x);
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        double a = std::floor(frac);
        if (a > 9.0e15) break;
        BigInt ai = static_cast<std::int64_t>(a);
        BigInt p2 = ai * p1 + p0;
        BigInt q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - a;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
        Rational cur{p1};
        cur /= q1;
        if (std::fabs(to_double(cur) - v) <= 1e-15 * std::max(1.0, v)) break;
    }
    if (q1 == 0) return Rational{0};
    Rational r{p1};
    r /= q1;
    return neg ? Rational(-r) : r;
}

}  // namespace ctxforge

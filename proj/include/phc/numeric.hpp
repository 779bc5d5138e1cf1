#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt int_pow(BigInt base, std::uint64_t exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline BigRat rat_pow(const BigRat& base, std::uint64_t exp) {
    return BigRat(int_pow(numerator(base), exp), int_pow(denominator(base), exp));
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= BigInt(n - k + i);
        r /= BigInt(i);
    }
    return r;
}

// Accepts "p/q", "p" or a decimal like "0.125"; the value must be exact.
inline BigRat parse_rational(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("bad rational: " + s); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
            if (q == 0) bad();
            return BigRat(p, q);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return BigRat(BigInt(s));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+") bad();
        BigInt p(digits);
        return BigRat(p, int_pow(10, s.size() - dot - 1));
    } catch (const std::runtime_error&) {
        bad();
    }
    return BigRat(0);
}

inline std::string format_rational(const BigRat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// smallest integer s >= 0 with s^2 >= r
inline BigInt ceil_sqrt(const BigRat& r) {
    if (r <= 0) return 0;
    const BigInt& p = numerator(r);
    const BigInt& q = denominator(r);
    BigInt d = p / q;
    BigInt s = sqrt(d);
    while (s * s * q < p) ++s;
    return s;
}

} // namespace phc

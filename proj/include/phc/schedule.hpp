#pragma once

#include "phc/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phc {

// Exact positive quantity 2^alpha * t^beta with rational exponents; t is a
// shared context so all schedule constants stay comparable symbolically.
struct LogMonomial {
    BigRat alpha; // exponent of 2
    BigRat beta;  // exponent of t
    long long t = 2;

    static LogMonomial one(long long t) { return {0, 0, t}; }
    static LogMonomial pow2(BigRat a, long long t) { return {std::move(a), 0, t}; }
    static LogMonomial tpow(BigRat b, long long t) { return {0, std::move(b), t}; }

    LogMonomial operator*(const LogMonomial& o) const;
    LogMonomial operator/(const LogMonomial& o) const;
    LogMonomial pow(const BigRat& e) const;
    LogMonomial inverse() const;

    // exact value; throws when exponents are fractional or impractically big
    BigRat to_rational() const;
};

enum class Cmp { less, equal, greater };

// Total order on monomials sharing t: same-sign exponent differences decide
// directly, powers of two reduce to integers, and mixed signs are settled
// against dyadic enclosures of log2(t) refined until strict.
Cmp compare(const LogMonomial& a, const LogMonomial& b);

// [lo, lo + 2^-precision] containing log2(t); lo has denominator 2^precision
std::pair<BigRat, BigRat> log2_enclosure(long long t, unsigned precision);

enum class Variant { general, k2_special, k3_special };

const char* variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& s);

struct Schedule {
    int k = 2;
    long long t = 2;
    Variant variant = Variant::general;
    LogMonomial c;
    std::vector<LogMonomial> delta; // delta[0..k-1]
    std::vector<LogMonomial> m;     // meaningful for indices 2..k-1 only
    LogMonomial n;
};

// general: c=2^{-(2k+1)}, delta_j=(c/t^k)^{(2kt^k)^{k-1-j}} (j>=1),
// delta_0=delta_1, m_j=delta_j^{-t^k}, n=t^{t^{k^2}}; plus the k=2 and k=3
// special choices. k2/k3 variants demand matching k.
Schedule build_schedule(int k, long long t, Variant variant);

struct IneqEntry {
    std::string name;
    std::optional<LogMonomial> lhs_m, rhs_m; // monomial sides when applicable
    BigInt lhs_i, rhs_i;                     // integer sides otherwise
    std::string rel;                         // "<", "<=", "=", ">=", ">"
    bool holds = false;
};

struct InequalityReport {
    std::vector<IneqEntry> entries;

    bool all_hold() const;
    const IneqEntry* find(const std::string& name) const;
};

// Every verification-relevant inequality plus the constants' ordering chain;
// with stop_at_first_failure the report ends at the first false entry.
InequalityReport verify_inequalities(const Schedule& s, bool stop_at_first_failure = false);

// smallest t in [2, t_max] whose schedule passes every inequality
std::optional<long long> minimal_valid_t(int k, Variant variant, long long t_max);

std::string format_monomial(const LogMonomial& m);
void write_inequality_report(const InequalityReport& report, bool structured, std::ostream& out);

} // namespace phc

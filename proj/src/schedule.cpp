#include "phc/schedule.hpp"

#include <ostream>
#include <stdexcept>

namespace phc {

namespace {

void check_context(const LogMonomial& a, const LogMonomial& b) {
    if (a.t != b.t) throw std::invalid_argument("monomials use different t contexts");
}

} // namespace

LogMonomial LogMonomial::operator*(const LogMonomial& o) const {
    check_context(*this, o);
    return {alpha + o.alpha, beta + o.beta, t};
}

LogMonomial LogMonomial::operator/(const LogMonomial& o) const {
    check_context(*this, o);
    return {alpha - o.alpha, beta - o.beta, t};
}

LogMonomial LogMonomial::pow(const BigRat& e) const { return {alpha * e, beta * e, t}; }

LogMonomial LogMonomial::inverse() const { return {-alpha, -beta, t}; }

BigRat LogMonomial::to_rational() const {
    if (denominator(alpha) != 1 || denominator(beta) != 1)
        throw std::domain_error("fractional exponents have no exact rational value");
    BigInt a = numerator(alpha), b = numerator(beta);
    if (abs(a) > 1'000'000 || abs(b) * (64 - __builtin_clzll(static_cast<unsigned long long>(t))) >
                                  1'000'000)
        throw std::domain_error("monomial value too large to materialize");
    BigRat v(1);
    BigRat two_pow = rat_pow(BigRat(2), static_cast<std::uint64_t>(abs(a)));
    if (a >= 0) v *= two_pow;
    else v /= two_pow;
    BigRat t_pow = rat_pow(BigRat(t), static_cast<std::uint64_t>(abs(b)));
    if (b >= 0) v *= t_pow;
    else v /= t_pow;
    return v;
}

std::pair<BigRat, BigRat> log2_enclosure(long long t, unsigned precision) {
    if (t < 2) throw std::invalid_argument("log2 enclosure needs t >= 2");
    int s = 63 - __builtin_clzll(static_cast<unsigned long long>(t)); // floor(log2 t)
    for (unsigned w = precision + 64;; w *= 2) {
        // mantissas scaled by 2^w bracket x = t/2^s in [1,2)
        BigInt lo = BigInt(t) << (w - static_cast<unsigned>(s));
        BigInt hi = lo;
        const BigInt two = BigInt(1) << (w + 1);
        const BigInt round_up = (BigInt(1) << w) - 1;
        BigInt frac = 0;
        bool certain = true;
        for (unsigned i = 0; i < precision; ++i) {
            lo = (lo * lo) >> w;
            hi = (hi * hi + round_up) >> w;
            frac <<= 1;
            if (lo >= two) { // x^2 in [2,4): fractional bit 1
                frac |= 1;
                lo >>= 1;
                hi = (hi + 1) >> 1;
            } else if (hi > two) { // interval straddles 2: need wider mantissas
                certain = false;
                break;
            }
        }
        if (!certain) continue;
        BigRat base = BigRat(frac, BigInt(1) << precision) + s;
        return {base, base + BigRat(1, BigInt(1) << precision)};
    }
}

Cmp compare(const LogMonomial& a, const LogMonomial& b) {
    check_context(a, b);
    if (a.t < 2) throw std::invalid_argument("comparison needs t >= 2");
    BigRat da = a.alpha - b.alpha, db = a.beta - b.beta;
    if (da == 0 && db == 0) return Cmp::equal;

    const long long t = a.t;
    if ((t & (t - 1)) == 0) { // t = 2^e: exponents collapse exactly
        int e = 63 - __builtin_clzll(static_cast<unsigned long long>(t));
        BigRat total = da + db * e;
        if (total == 0) return Cmp::equal;
        return total > 0 ? Cmp::greater : Cmp::less;
    }
    if (da >= 0 && db >= 0) return Cmp::greater;
    if (da <= 0 && db <= 0) return Cmp::less;

    // sign of da + db*log2(t); log2(t) irrational here, so refinement ends
    BigRat thr = -da / db;
    for (unsigned p = 64;; p *= 2) {
        auto [lo, hi] = log2_enclosure(t, p);
        if (thr <= lo) return db > 0 ? Cmp::greater : Cmp::less;
        if (thr >= hi) return db > 0 ? Cmp::less : Cmp::greater;
    }
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::general: return "general";
        case Variant::k2_special: return "k2-special";
        case Variant::k3_special: return "k3-special";
    }
    return "general";
}

std::optional<Variant> parse_variant(const std::string& s) {
    if (s == "general") return Variant::general;
    if (s == "k2-special") return Variant::k2_special;
    if (s == "k3-special") return Variant::k3_special;
    return std::nullopt;
}

Schedule build_schedule(int k, long long t, Variant variant) {
    if (k < 2) throw std::invalid_argument("schedule needs k >= 2");
    if (t < 2) throw std::invalid_argument("schedule needs t >= 2");
    if (variant == Variant::k2_special && k != 2)
        throw std::invalid_argument("k2-special schedule requires k = 2");
    if (variant == Variant::k3_special && k != 3)
        throw std::invalid_argument("k3-special schedule requires k = 3");

    Schedule s;
    s.k = k;
    s.t = t;
    s.variant = variant;
    s.c = LogMonomial::pow2(-(2 * k + 1), t);
    s.delta.assign(k, LogMonomial::one(t));
    s.m.assign(k, LogMonomial::one(t));

    if (variant == Variant::k2_special) {
        s.delta[0] = s.delta[1] = LogMonomial{-6, -3, t};
        s.n = LogMonomial::tpow(3 * (BigRat(t) + 1), t);
        return s;
    }
    if (variant == Variant::k3_special) {
        s.delta[2] = LogMonomial{-7, -3, t};
        s.m[2] = LogMonomial::tpow(7 * BigRat(t), t);
        s.delta[0] = s.delta[1] = LogMonomial{-10, -29 * BigRat(t), t};
        s.n = LogMonomial::tpow(30 * rat_pow(BigRat(t), 3), t);
        return s;
    }

    const BigInt tk = int_pow(t, static_cast<std::uint64_t>(k));
    const BigInt base = 2 * k * tk; // 2k t^k
    for (int j = k - 1; j >= 1; --j) {
        BigInt e = int_pow(base, static_cast<std::uint64_t>(k - 1 - j));
        s.delta[j] = LogMonomial{BigRat(-(2 * k + 1)) * e, BigRat(-k) * e, t};
        if (j >= 2) s.m[j] = s.delta[j].pow(BigRat(-tk));
    }
    s.delta[0] = s.delta[1];
    s.n = LogMonomial::tpow(BigRat(int_pow(t, static_cast<std::uint64_t>(k) *
                                                  static_cast<std::uint64_t>(k))),
                            t);
    return s;
}

bool InequalityReport::all_hold() const {
    for (const auto& e : entries)
        if (!e.holds) return false;
    return true;
}

const IneqEntry* InequalityReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

struct ReportBuilder {
    InequalityReport& rep;
    bool stop;
    bool stopped = false;

    bool add_mono(std::string name, const LogMonomial& lhs, const std::string& rel,
                  const LogMonomial& rhs) {
        if (stopped) return false;
        Cmp c = compare(lhs, rhs);
        bool holds = false;
        if (rel == "<") holds = c == Cmp::less;
        else if (rel == "<=") holds = c != Cmp::greater;
        else if (rel == "=") holds = c == Cmp::equal;
        else if (rel == ">=") holds = c != Cmp::less;
        else holds = c == Cmp::greater;
        rep.entries.push_back({std::move(name), lhs, rhs, 0, 0, rel, holds});
        if (!holds && stop) stopped = true;
        return holds;
    }

    bool add_int(std::string name, BigInt lhs, const std::string& rel, BigInt rhs) {
        if (stopped) return false;
        bool holds = false;
        if (rel == "<") holds = lhs < rhs;
        else if (rel == "<=") holds = lhs <= rhs;
        else if (rel == "=") holds = lhs == rhs;
        else if (rel == ">=") holds = lhs >= rhs;
        else holds = lhs > rhs;
        rep.entries.push_back(
            {std::move(name), std::nullopt, std::nullopt, std::move(lhs), std::move(rhs), rel,
             holds});
        if (!holds && stop) stopped = true;
        return holds;
    }
};

} // namespace

InequalityReport verify_inequalities(const Schedule& s, bool stop_at_first_failure) {
    const int k = s.k;
    const long long t = s.t;
    InequalityReport rep;
    ReportBuilder b{rep, stop_at_first_failure};

    const LogMonomial two_t = LogMonomial{1, 1, t}; // 2t
    const LogMonomial four_pow = LogMonomial::pow2(2 * (k - 1), t);
    const BigRat t_pow_km1 = BigRat(int_pow(t, static_cast<std::uint64_t>(k - 1)));

    b.add_mono("0bdd", (s.delta[0] / four_pow).pow(t_pow_km1) * s.n, ">=", two_t);

    b.add_mono("1bdd.1", s.delta[1] / four_pow * (s.delta[1] * s.n).pow(BigRat(1, 2)), ">=",
               two_t);
    b.add_mono("1bdd.2", (s.delta[1] / four_pow).pow(t_pow_km1) * s.n, ">=", two_t);

    for (int j = 2; j <= k - 1; ++j) {
        LogMonomial core = s.delta[j].pow(2) / LogMonomial::pow2(1, t) / four_pow;
        BigRat t_pow_jm1 = BigRat(int_pow(t, static_cast<std::uint64_t>(j - 1)));
        std::string tag = "jbddE64[" + std::to_string(j) + "]";
        b.add_mono(tag + ".1", core.pow(t_pow_jm1) * s.m[j], ">=", two_t);
        b.add_mono(tag + ".2", core.pow(t_pow_km1) * s.n, ">=", two_t);
    }

    b.add_mono("bdd.1", s.delta[k - 1], "=", LogMonomial{-(2 * k + 1), -k, t});
    for (int j = 0; j <= k - 2; ++j) {
        std::string tag = "bdd[" + std::to_string(j) + "]";
        b.add_mono(tag + ".chain", s.delta[j], "<=", s.delta[k - 2]);
        b.add_mono(tag + ".cap", s.delta[k - 2], "<=",
                   LogMonomial{-(3 * k - j), -(2 * k - j - 1), t});
    }

    for (int js = 2; js <= k - 1; ++js) {
        std::string tag = "jbdd-rainbow[" + std::to_string(js) + "]";
        b.add_mono(tag + ".margin", s.delta[js] * s.m[js], ">",
                   LogMonomial::pow2(js + 3, t));
        for (int j = 0; j < js; ++j)
            b.add_mono(tag + "[" + std::to_string(j) + "].quotient", s.delta[j] / s.delta[js],
                       "<",
                       LogMonomial::pow2(-(js + 1), t) * s.m[js].pow(-(2 * js - j)));
    }

    // ordering chain 2 <= k < 1/c < t < 1/delta_{k-1} < m_{k-1} < ... < 1/delta_1 = 1/delta_0 < n
    b.add_int("chain.2<=k", 2, "<=", k);
    b.add_int("chain.k<1/c", k, "<", int_pow(2, static_cast<std::uint64_t>(2 * k + 1)));
    b.add_int("chain.1/c<t", int_pow(2, static_cast<std::uint64_t>(2 * k + 1)), "<", t);
    b.add_mono("chain.t<1/delta[" + std::to_string(k - 1) + "]", LogMonomial::tpow(1, t), "<",
               s.delta[k - 1].inverse());
    for (int j = k - 1; j >= 2; --j) {
        b.add_mono("chain.1/delta[" + std::to_string(j) + "]<m[" + std::to_string(j) + "]",
                   s.delta[j].inverse(), "<", s.m[j]);
        b.add_mono("chain.m[" + std::to_string(j) + "]<1/delta[" + std::to_string(j - 1) + "]",
                   s.m[j], "<", s.delta[j - 1].inverse());
    }
    b.add_mono("chain.1/delta[1]=1/delta[0]", s.delta[1].inverse(), "=", s.delta[0].inverse());
    b.add_mono("chain.1/delta[0]<n", s.delta[0].inverse(), "<", s.n);

    return rep;
}

std::optional<long long> minimal_valid_t(int k, Variant variant, long long t_max) {
    for (long long t = 2; t <= t_max; ++t) {
        Schedule s = build_schedule(k, t, variant);
        if (verify_inequalities(s, true).all_hold()) return t;
    }
    return std::nullopt;
}

std::string format_monomial(const LogMonomial& m) {
    return "2^(" + format_rational(m.alpha) + ")*t^(" + format_rational(m.beta) + ")";
}

void write_inequality_report(const InequalityReport& report, bool structured,
                             std::ostream& out) {
    for (const auto& e : report.entries) {
        if (structured) {
            out << "ineq name=" << e.name << " lhs=";
            if (e.lhs_m) out << format_monomial(*e.lhs_m);
            else out << e.lhs_i;
            out << " rel=" << e.rel << " rhs=";
            if (e.rhs_m) out << format_monomial(*e.rhs_m);
            else out << e.rhs_i;
            out << " holds=" << (e.holds ? "true" : "false") << '\n';
        } else {
            out << e.name << ": ";
            if (e.lhs_m) out << format_monomial(*e.lhs_m);
            else out << e.lhs_i;
            out << ' ' << e.rel << ' ';
            if (e.rhs_m) out << format_monomial(*e.rhs_m);
            else out << e.rhs_i;
            out << " -> " << (e.holds ? "holds" : "fails") << '\n';
        }
    }
    out << (structured ? "schedule_valid " : "all inequalities hold: ")
        << (report.all_hold() ? "true" : "false") << '\n';
}

} // namespace phc

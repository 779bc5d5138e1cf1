#include "phc/boundedness.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace phc {

void DeltaVec::validate() const {
    for (const auto& d : deltas)
        if (d <= 0 || d > 1) throw std::invalid_argument("delta entries must lie in (0,1]");
}

std::vector<int> FiberStats::s_coords(std::uint64_t flat_s) const {
    std::vector<int> out(j_sizes.size());
    for (int c = static_cast<int>(j_sizes.size()) - 1; c >= 0; --c) {
        out[c] = static_cast<int>(flat_s % j_sizes[c]);
        flat_s /= j_sizes[c];
    }
    return out;
}

FiberStats fiber_stats(const Colouring& col, JSet j_set, const BigRat& delta) {
    const Grid& g = col.grid;
    JSet full = (1u << g.k) - 1;
    if ((j_set & ~full) != 0) throw std::invalid_argument("J mentions a class beyond k");
    if (j_set == full)
        throw std::invalid_argument("invalid level: boundedness needs J a proper subset");
    if (delta <= 0 || delta > 1) throw std::invalid_argument("delta must lie in (0,1]");

    FiberStats st;
    st.j_set = j_set;
    st.delta = delta;
    for (int c = 0; c < g.k; ++c) {
        if (j_set & (1u << c)) {
            st.j_sizes.push_back(g.sizes[c]);
            st.v_j *= static_cast<std::uint64_t>(g.sizes[c]);
        } else {
            st.v_rest *= static_cast<std::uint64_t>(g.sizes[c]);
        }
    }
    st.table.resize(st.v_j);

    JProjector idx(g, j_set);
    std::vector<int> coords;
    for (std::uint64_t f = 0; f < g.cells; ++f) {
        g.coords_of(f, coords);
        ++st.table[idx.index(coords)][col.colour[f]];
    }

    const BigInt num = numerator(delta), den = denominator(delta);
    const BigInt cap_rhs = num * st.v_rest; // fiber > delta*v_rest  <=>  fiber*den > cap_rhs
    for (std::uint64_t s = 0; s < st.v_j; ++s) {
        for (const auto& [colour, cnt] : st.table[s]) {
            if (BigInt(cnt) * den > cap_rhs) {
                st.bad_set.push_back(s);
                break;
            }
        }
    }
    return st;
}

BoundednessReport is_bounded(const Colouring& col, const DeltaVec& dv) {
    const int k = col.grid.k;
    if (dv.k() != k) throw std::invalid_argument("delta vector length must equal k");
    dv.validate();

    BoundednessReport rep;
    rep.k = k;
    for (int level = 0; level < k; ++level) {
        const BigRat& d = dv.deltas[level];
        LevelVerdict v;
        v.level = level;
        v.delta = d;
        v.bounded = true;
        for (JSet j : jsets_of_size(k, level)) {
            FiberStats st = fiber_stats(col, j, d);
            // (delta,J)-bounded <=> |bad_set| <= delta*|V_J|
            bool ok = BigInt(st.bad_set.size()) * denominator(d) <= numerator(d) * st.v_j;
            if (!ok) {
                v.bounded = false;
                v.failing_j = j;
                break;
            }
        }
        if (!v.bounded && !rep.j_star) {
            rep.j_star = level;
            rep.j_star_witness = v.failing_j;
        }
        rep.levels.push_back(std::move(v));
    }
    if (rep.j_star)
        rep.witness_stats =
            fiber_stats(col, *rep.j_star_witness, dv.deltas[static_cast<std::size_t>(*rep.j_star)]);
    return rep;
}

BigInt ConflictCensus::total() const {
    BigInt t = 0;
    for (const auto& p : pairs) t += p;
    return t;
}

ConflictCensus conflict_census(const Colouring& col) {
    const Grid& g = col.grid;
    const int k = g.k;
    const JSet full = (1u << k) - 1;

    // over(J) = same-colour pairs agreeing on at least J; exact counts follow
    // by inclusion-exclusion over supersets.
    std::vector<BigInt> over(1u << k, 0);
    std::vector<std::pair<std::uint64_t, int>> keyed(g.cells);
    std::vector<int> coords;
    for (JSet j = 0; j < (1u << k); ++j) {
        JProjector idx(g, j);
        for (std::uint64_t f = 0; f < g.cells; ++f) {
            g.coords_of(f, coords);
            keyed[f] = {idx.index(coords), col.colour[f]};
        }
        std::sort(keyed.begin(), keyed.end());
        std::uint64_t run = 1;
        for (std::uint64_t i = 1; i <= keyed.size(); ++i) {
            if (i < keyed.size() && keyed[i] == keyed[i - 1]) {
                ++run;
                continue;
            }
            if (run > 1) over[j] += BigInt(run) * (run - 1) / 2;
            run = 1;
        }
    }

    ConflictCensus census;
    census.k = k;
    census.pairs.assign(1u << k, 0);
    for (JSet j = 0; j < (1u << k); ++j) {
        if (j == full) continue;
        BigInt exact = 0;
        // supersets of j
        JSet rest = full & ~j;
        for (JSet sub = rest;; sub = (sub - 1) & rest) {
            JSet sup = j | sub;
            if (jset_size(sub) % 2 == 0)
                exact += over[sup];
            else
                exact -= over[sup];
            if (sub == 0) break;
        }
        census.pairs[j] = exact;
    }
    return census;
}

BoundVerdict check_bddJ_bound(const Colouring& col, JSet j_set, const BigRat& delta) {
    FiberStats st = fiber_stats(col, j_set, delta);
    const BigInt num = numerator(delta), den = denominator(delta);
    if (BigInt(st.bad_set.size()) * den > num * st.v_j) return BoundVerdict::inapplicable;
    ConflictCensus census = conflict_census(col);
    BigInt lhs = census.pairs[j_set] * den;
    BigInt rhs = num * BigInt(st.v_j) * BigInt(st.v_rest) * BigInt(st.v_rest);
    return lhs <= rhs ? BoundVerdict::holds : BoundVerdict::fails;
}

void write_boundedness_report(const BoundednessReport& report, bool structured,
                              std::ostream& out) {
    if (structured) {
        for (const auto& lv : report.levels) {
            out << "level j=" << lv.level << " delta=" << format_rational(lv.delta)
                << " bounded=" << (lv.bounded ? "yes" : "no");
            if (lv.failing_j) out << " failing_J=" << jset_name(*lv.failing_j, report.k);
            out << '\n';
        }
        if (report.j_star)
            out << "jstar " << *report.j_star << " J=" << jset_name(*report.j_star_witness, report.k)
                << '\n';
        else
            out << "jstar none\n";
    } else {
        for (const auto& lv : report.levels) {
            out << "level " << lv.level << " (delta " << format_rational(lv.delta) << "): "
                << (lv.bounded ? "bounded" : "unbounded");
            if (lv.failing_j) out << ", least failing J " << jset_name(*lv.failing_j, report.k);
            out << '\n';
        }
        if (report.j_star)
            out << "minimal unbounded level " << *report.j_star << " with witness "
                << jset_name(*report.j_star_witness, report.k) << '\n';
        else
            out << "colouring is bounded at every level\n";
    }
    if (report.witness_stats) {
        const FiberStats& st = *report.witness_stats;
        out << (structured ? "badset" : "bad tuples (first 100):");
        std::size_t shown = 0;
        for (std::uint64_t s : st.bad_set) {
            if (shown++ == 100) break;
            auto c = st.s_coords(s);
            out << " (";
            for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
            out << ")";
        }
        out << '\n';
    }
}

void write_census(const ConflictCensus& census, bool structured, std::ostream& out) {
    for (JSet j = 0; j < (1u << census.k); ++j) {
        if (j == (1u << census.k) - 1) continue;
        if (structured)
            out << "census J=" << jset_name(j, census.k) << " pairs=" << census.pairs[j] << '\n';
        else
            out << "agreement " << jset_name(j, census.k) << ": " << census.pairs[j]
                << " pair(s)\n";
    }
    out << (structured ? "census_total " : "total same-colour pairs: ") << census.total() << '\n';
}

} // namespace phc

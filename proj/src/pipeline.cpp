#include "phc/pipeline.hpp"

#include "phc/extremal.hpp"
#include "phc/rainbow.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace phc {

void PipelineTrace::note(const std::string& key, const std::string& value) {
    lines.push_back(key + "=" + value);
}

PartiteHypergraph build_star(const Colouring& col, JSet j_set,
                             const std::vector<std::pair<std::vector<int>, int>>& bases) {
    const Grid& g = col.grid;
    JProjector proj(g, j_set);
    std::map<std::uint64_t, int> base_colour;
    for (const auto& [coords, colour] : bases) {
        std::uint64_t f = 0;
        for (std::size_t i = 0; i < proj.members.size(); ++i)
            f += proj.mul[i] * static_cast<std::uint64_t>(coords[i]);
        if (!base_colour.emplace(f, colour).second)
            throw std::invalid_argument("duplicate base tuple");
    }

    PartiteHypergraph star;
    star.grid = g;
    star.present.assign(g.cells, 0);
    std::vector<int> coords;
    for (std::uint64_t f = 0; f < g.cells; ++f) {
        g.coords_of(f, coords);
        auto it = base_colour.find(proj.index(coords));
        if (it != base_colour.end() && it->second == col.colour[f]) {
            star.present[f] = 1;
            ++star.edge_count;
        }
    }
    return star;
}

SplitResult box_principle_split(const std::vector<SplitItem>& items, std::int64_t threshold) {
    if (threshold < 1) throw std::invalid_argument("threshold must be positive");
    SplitResult res;
    std::map<int, std::vector<SplitItem>> by_colour;
    for (const auto& it : items) by_colour[it.colour].push_back(it);

    const std::vector<SplitItem>* best = nullptr;
    for (const auto& [colour, members] : by_colour)
        if (!best || members.size() > best->size()) best = &members;
    if (best && static_cast<std::int64_t>(best->size()) >= threshold) {
        res.kind = SplitResult::Kind::equal;
        res.members.assign(best->begin(), best->begin() + threshold);
        return res;
    }

    std::vector<char> seen;
    for (const auto& it : items) {
        if (it.colour >= static_cast<int>(seen.size())) seen.resize(it.colour + 1, 0);
        if (seen[it.colour]) continue;
        seen[it.colour] = 1;
        res.members.push_back(it);
    }
    res.kind = static_cast<std::int64_t>(res.members.size()) >= threshold
                   ? SplitResult::Kind::distinct
                   : SplitResult::Kind::failure;
    return res;
}

namespace {

struct Restriction {
    std::vector<std::vector<int>> keep; // per class, sorted kept vertex ids
};

Restriction identity_restriction(const Grid& g) {
    Restriction r;
    r.keep.resize(g.k);
    for (int c = 0; c < g.k; ++c) {
        r.keep[c].resize(g.sizes[c]);
        for (int v = 0; v < g.sizes[c]; ++v) r.keep[c][v] = v;
    }
    return r;
}

PartiteHypergraph restrict_hypergraph(const PartiteHypergraph& h, const Restriction& r) {
    std::vector<int> sizes(h.grid.k);
    for (int c = 0; c < h.grid.k; ++c) sizes[c] = static_cast<int>(r.keep[c].size());
    PartiteHypergraph out;
    out.grid = Grid(sizes);
    out.present.assign(out.grid.cells, 0);
    std::vector<int> local, coords(h.grid.k);
    for (std::uint64_t f = 0; f < out.grid.cells; ++f) {
        out.grid.coords_of(f, local);
        for (int c = 0; c < h.grid.k; ++c) coords[c] = r.keep[c][local[c]];
        if (h.has(coords)) {
            out.present[f] = 1;
            ++out.edge_count;
        }
    }
    return out;
}

SubBox lift_box(const SubBox& local, const Restriction& r) {
    SubBox out;
    out.cls.resize(local.k());
    for (int c = 0; c < local.k(); ++c)
        for (int v : local.cls[c]) out.cls[c].push_back(r.keep[c][v]);
    return out;
}

struct HeavyTuple {
    std::uint64_t flat = 0;
    int colour = 0;
    std::uint64_t count = 0;
};

// tuples whose best colour fiber reaches delta*|V_rest|; colour is the most
// frequent one, smallest id on ties
std::vector<HeavyTuple> heavy_tuples(const FiberStats& st) {
    std::vector<HeavyTuple> out;
    const BigInt num = numerator(st.delta), den = denominator(st.delta);
    const BigInt rhs = num * st.v_rest;
    for (std::uint64_t s = 0; s < st.v_j; ++s) {
        HeavyTuple best;
        for (const auto& [colour, cnt] : st.table[s]) {
            if (cnt > best.count) {
                best.colour = colour;
                best.count = cnt;
            }
        }
        if (best.count == 0) continue;
        if (BigInt(best.count) * den >= rhs) {
            best.flat = s;
            out.push_back(best);
        }
    }
    return out;
}

struct Runner {
    const Colouring& col;
    const int t;
    const DeltaVec& dv;
    const std::uint64_t seed;
    Budget& budget;
    const int max_retries;
    PipelineOutcome out;

    PipelineOutcome fail(const std::string& step, const std::string& reason,
                         bool is_budget = false) {
        out.failure = PipelineFailure{out.trace.branch, step, reason, is_budget};
        return std::move(out);
    }

    PipelineOutcome finish(const SubBox& box, JSet expect) {
        auto w = check_j_canonical(col, box, expect);
        if (!w)
            return fail("verification",
                        "extracted box is not " + jset_name(expect, col.grid.k) + "-canonical");
        out.trace.note("witness_J", jset_name(expect, col.grid.k));
        out.witness = std::move(*w);
        return std::move(out);
    }

    std::optional<SubBox> extract_with_fallback(const ExtremalInstance& inst) {
        auto rep = assumption_holds(inst);
        out.trace.note("extraction_assumption", rep.holds ? "true" : "false");
        auto box = extract_complete_box(inst, ExtractMode::proof_guided, budget);
        if (!box) {
            out.trace.note("extraction_fallback", "exhaustive");
            box = extract_complete_box(inst, ExtractMode::exhaustive, budget);
        }
        return box;
    }

    PipelineOutcome run() {
        const Grid& g = col.grid;
        const int k = g.k;
        if (k < 2) throw std::invalid_argument("pipeline needs k >= 2");
        for (int c = 0; c < k; ++c)
            if (t > g.sizes[c]) throw std::invalid_argument("need t <= n_j in every class");

        BoundednessReport rep = is_bounded(col, dv);
        out.trace.j_star = rep.j_star;
        out.trace.j_star_witness = rep.j_star_witness;

        if (rep.bounded()) return run_bounded();
        const int js = *rep.j_star;
        out.trace.note("jstar", std::to_string(js));
        out.trace.note("Jstar", jset_name(*rep.j_star_witness, k));
        if (js == 0) return run_level0(*rep.witness_stats);
        if (js == 1) return run_level1(*rep.witness_stats);
        return run_levelj(*rep.witness_stats, js);
    }

    PipelineOutcome run_bounded() {
        out.trace.branch = "bounded";
        const Grid& g = col.grid;
        for (int c = 0; c < g.k; ++c)
            if (2 * t > g.sizes[c])
                return fail("sampling", "sampler needs 2t <= n_j in every class");
        SampleOutcome so = sample_rainbow_box(col, dv, t, seed, max_retries);
        out.trace.note("sampler_attempts", std::to_string(so.attempts));
        if (!so.feasible) out.trace.anomalies.push_back("sampler regime advisory: " + so.note);
        if (!so.result) return fail("sampling", "rainbow sampler exhausted its retries");
        return finish(so.result->box, (1u << g.k) - 1);
    }

    PipelineOutcome run_level0(const FiberStats& st) {
        out.trace.branch = "jstar=0";
        auto heavy = heavy_tuples(st);
        if (heavy.empty()) return fail("heavy-set", "no colour reaches the delta_0 share");
        const int ell = heavy.front().colour;
        out.trace.note("colour", std::to_string(ell));

        PartiteHypergraph h;
        h.grid = col.grid;
        h.present.assign(h.grid.cells, 0);
        for (std::uint64_t f = 0; f < h.grid.cells; ++f)
            if (col.colour[f] == ell) {
                h.present[f] = 1;
                ++h.edge_count;
            }
        ExtremalInstance inst{std::move(h), std::vector<int>(col.grid.k, t)};
        auto box = extract_with_fallback(inst);
        if (!box) return fail("extraction", "no monochromatic box found");
        return finish(*box, 0);
    }

    PipelineOutcome run_level1(const FiberStats& st) {
        out.trace.branch = "jstar=1";
        const Grid& g = col.grid;
        const int cls = st.j_set == 0 ? 0 : __builtin_ctz(st.j_set); // witness class, 0-based

        auto heavy = heavy_tuples(st);
        out.trace.note("heavy_vertices", std::to_string(heavy.size()));
        if (heavy.empty()) return fail("heavy-set", "no vertex meets the delta_1 degree bound");

        std::vector<SplitItem> items;
        for (const auto& h : heavy)
            items.push_back({static_cast<int>(h.flat), h.colour});
        // the box principle wants sqrt(delta_1 n) members; extraction needs t
        BigInt thr = ceil_sqrt(st.delta * BigRat(g.sizes[cls]));
        std::int64_t threshold = std::max<std::int64_t>(t, static_cast<std::int64_t>(thr));
        out.trace.note("split_threshold", std::to_string(threshold));

        SplitResult split = box_principle_split(items, threshold);
        if (split.kind == SplitResult::Kind::failure)
            return fail("split", "heavy set too small for the box principle");
        const bool equal = split.kind == SplitResult::Kind::equal;
        out.trace.branch = equal ? "jstar=1-equal" : "jstar=1-distinct";
        out.trace.note("split_size", std::to_string(split.members.size()));

        std::vector<std::pair<std::vector<int>, int>> bases;
        for (const auto& it : split.members) bases.push_back({{it.id}, it.colour});
        PartiteHypergraph star = build_star(col, st.j_set, bases);
        out.trace.note("star_edges", std::to_string(star.edge_count));
        if (star.edge_count == 0) return fail("extraction", "star hypergraph is empty");

        Restriction r = identity_restriction(g);
        r.keep[cls].clear();
        for (const auto& it : split.members) r.keep[cls].push_back(it.id);
        std::sort(r.keep[cls].begin(), r.keep[cls].end());

        ExtremalInstance inst{restrict_hypergraph(star, r), std::vector<int>(g.k, t)};
        auto box = extract_with_fallback(inst);
        if (!box) return fail("extraction", "no complete box in the star hypergraph");
        return finish(lift_box(*box, r), equal ? 0 : st.j_set);
    }

    PipelineOutcome run_levelj(const FiberStats& st, int js) {
        out.trace.branch = "jstar=" + std::to_string(js);
        const Grid& g = col.grid;
        const int k = g.k;

        auto heavy = heavy_tuples(st);
        out.trace.note("heavy_tuples", std::to_string(heavy.size()));
        if (heavy.empty()) return fail("heavy-set", "no tuple meets the delta_j share");

        // auxiliary hypergraph G on the witness classes with phi_G = ell
        std::vector<int> members = jset_members(st.j_set, k); // 1-based
        std::vector<int> g_sizes;
        for (int c : members) g_sizes.push_back(g.sizes[c - 1]);
        PartiteHypergraph aux;
        aux.grid = Grid(g_sizes);
        aux.present.assign(aux.grid.cells, 0);
        Colouring aux_col;
        aux_col.grid = aux.grid;
        aux_col.colour.assign(aux.grid.cells, 0);
        for (const auto& h : heavy) {
            aux.present[h.flat] = 1; // FiberStats flat order matches aux's grid
            ++aux.edge_count;
            aux_col.colour[h.flat] = h.colour;
            aux_col.palette = std::max(aux_col.palette, h.colour + 1);
        }

        // quotient delta vector, clamped into (0,1] for the advisory checks
        DeltaVec quotient;
        for (int j = 0; j < js; ++j) {
            BigRat q = dv.deltas[j] / dv.deltas[js];
            if (q > 1) {
                out.trace.anomalies.push_back("delta_" + std::to_string(j) +
                                              "/delta_jstar exceeds 1; clamped");
                q = 1;
            }
            quotient.deltas.push_back(q);
        }
        verify_aux_boundedness(aux, aux_col, quotient);

        // desk-scale m: within every witness class, as large as the advisory
        // floor 2^{js+3}/d(G) asks for when that is attainable
        std::int64_t min_class = *std::min_element(g_sizes.begin(), g_sizes.end());
        BigRat d_aux = density(aux);
        BigInt want = (int_pow(2, static_cast<std::uint64_t>(js + 3)) * denominator(d_aux) +
                       numerator(d_aux) - 1) /
                      numerator(d_aux);
        if (want < 2 * t) want = 2 * t;
        if (want > min_class) want = min_class;
        std::int64_t m = static_cast<std::int64_t>(want);
        out.trace.note("m", std::to_string(m));
        if (m < t) return fail("sampling", "sample size m cannot host a t-box");

        SampleOutcome so = sample_rainbow_dense(aux, aux_col, static_cast<int>(m), seed,
                                                max_retries, &quotient);
        out.trace.note("sampler_attempts", std::to_string(so.attempts));
        if (!so.feasible) out.trace.anomalies.push_back("dense regime advisory: " + so.note);
        if (!so.result) return fail("sampling", "dense rainbow sampler exhausted its retries");
        out.trace.note("rainbow_bases", std::to_string(so.result->surviving_edges.size()));

        std::vector<std::pair<std::vector<int>, int>> bases;
        std::vector<int> coords;
        for (std::uint64_t f : so.result->surviving_edges) {
            aux.grid.coords_of(f, coords);
            bases.push_back({coords, aux_col.colour[f]});
        }
        PartiteHypergraph star = build_star(col, st.j_set, bases);
        out.trace.note("star_edges", std::to_string(star.edge_count));
        if (star.edge_count == 0) return fail("extraction", "star hypergraph is empty");

        Restriction r = identity_restriction(g);
        for (std::size_t i = 0; i < members.size(); ++i)
            r.keep[members[i] - 1] = so.result->box.cls[i];
        ExtremalInstance inst{restrict_hypergraph(star, r), std::vector<int>(k, t)};
        auto box = extract_with_fallback(inst);
        if (!box) return fail("extraction", "no complete box in the star hypergraph");
        return finish(lift_box(*box, r), st.j_set);
    }

    // re-check the claimed boundedness of phi_G over present edges only
    void verify_aux_boundedness(const PartiteHypergraph& aux, const Colouring& aux_col,
                                const DeltaVec& quotient) {
        const int kk = aux.grid.k;
        std::vector<int> coords;
        for (int level = 0; level < kk; ++level) {
            const BigRat& q = quotient.deltas[level];
            const BigInt num = numerator(q), den = denominator(q);
            for (JSet j : jsets_of_size(kk, level)) {
                JProjector proj(aux.grid, j);
                std::uint64_t v_j = proj.total();
                std::uint64_t v_rest = aux.grid.cells / v_j;
                std::vector<std::map<int, std::uint64_t>> table(v_j);
                for (std::uint64_t f = 0; f < aux.grid.cells; ++f) {
                    if (!aux.present[f]) continue;
                    aux.grid.coords_of(f, coords);
                    ++table[proj.index(coords)][aux_col.colour[f]];
                }
                std::uint64_t bad = 0;
                for (const auto& row : table)
                    for (const auto& [colour, cnt] : row)
                        if (BigInt(cnt) * den > num * v_rest) {
                            ++bad;
                            break;
                        }
                if (BigInt(bad) * den > num * v_j)
                    out.trace.anomalies.push_back(
                        "phi_G is not (delta_" + std::to_string(level) + "/delta_jstar, " +
                        std::to_string(level) + ")-bounded at J=" + jset_name(j, kk));
            }
        }
    }
};

} // namespace

PipelineOutcome find_canonical_copy(const Colouring& col, int t, const DeltaVec& dv,
                                    std::uint64_t seed, Budget& budget, int max_retries) {
    Runner runner{col, t, dv, seed, budget, max_retries, {}};
    runner.out.trace.note("seed", std::to_string(seed));
    runner.out.trace.note("t", std::to_string(t));
    try {
        return runner.run();
    } catch (const BudgetExceeded& e) {
        return runner.fail(runner.out.trace.branch.empty() ? "setup" : "extraction", e.what(),
                           true);
    }
}

void write_trace(const PipelineOutcome& outcome, std::ostream& out) {
    out << "branch " << (outcome.trace.branch.empty() ? "none" : outcome.trace.branch) << '\n';
    for (const auto& line : outcome.trace.lines) out << "trace " << line << '\n';
    for (const auto& a : outcome.trace.anomalies) out << "anomaly " << a << '\n';
    if (outcome.witness) {
        out << "outcome witness\n";
    } else if (outcome.failure) {
        out << "outcome failure step=" << outcome.failure->step
            << " reason=\"" << outcome.failure->reason << "\""
            << (outcome.failure->budget ? " budget=true" : "") << '\n';
    }
}

} // namespace phc

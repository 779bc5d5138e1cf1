#include "phc/rainbow.hpp"

#include "phc/extremal.hpp"
#include "phc/rng.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace phc {

std::uint64_t SampleDiagnostics::conflict_total() const {
    std::uint64_t s = 0;
    for (std::uint64_t x : x_j) s += x;
    return s;
}

bool check_simplerain(const DeltaVec& dv, int t, const std::vector<int>& sizes) {
    const int k = static_cast<int>(sizes.size());
    if (dv.k() != k) throw std::invalid_argument("delta vector length must equal k");
    dv.validate();
    for (int j = 0; j < k; ++j) {
        // delta_j * 2^{3k-j} * t^{2k-j-1} <= 1
        BigInt scale = int_pow(2, static_cast<std::uint64_t>(3 * k - j)) *
                       int_pow(t, static_cast<std::uint64_t>(2 * k - j - 1));
        if (numerator(dv.deltas[j]) * scale > denominator(dv.deltas[j])) return false;
    }
    return true;
}

namespace {

struct InducedEdge {
    std::vector<int> local;
    std::uint64_t flat = 0; // ambient
    int colour = 0;
};

// all tuples over the sampled classes, row-major local order
std::vector<InducedEdge> induced_edges(const Grid& grid, const std::vector<std::vector<int>>& w,
                                       const std::vector<int>& colours,
                                       const std::vector<char>* present) {
    const int k = grid.k;
    std::vector<InducedEdge> out;
    std::vector<int> local(k, 0), coords(k);
    for (int c = 0; c < k; ++c) coords[c] = w[c][0];
    for (;;) {
        std::uint64_t f = grid.flat(coords);
        if (!present || (*present)[f]) out.push_back({local, f, colours[f]});
        int c = k - 1;
        while (c >= 0) {
            if (++local[c] < static_cast<int>(w[c].size())) {
                coords[c] = w[c][local[c]];
                break;
            }
            local[c] = 0;
            coords[c] = w[c][0];
            --c;
        }
        if (c < 0) return out;
    }
}

std::vector<std::uint64_t> conflict_table(const std::vector<InducedEdge>& edges, int k) {
    std::vector<std::uint64_t> x(1u << k, 0);
    // bucket by colour first; pairs within a bucket only
    std::map<int, std::vector<const InducedEdge*>> buckets;
    for (const auto& e : edges) buckets[e.colour].push_back(&e);
    for (const auto& [colour, bucket] : buckets) {
        for (std::size_t a = 0; a < bucket.size(); ++a)
            for (std::size_t b = a + 1; b < bucket.size(); ++b) {
                JSet agree = 0;
                for (int c = 0; c < k; ++c)
                    if (bucket[a]->local[c] == bucket[b]->local[c]) agree |= 1u << c;
                ++x[agree];
            }
    }
    return x;
}

} // namespace

BoxAttempt attempt_rainbow_box(const Colouring& col, int t, std::uint64_t attempt_seed) {
    const Grid& g = col.grid;
    const int k = g.k;
    for (int c = 0; c < k; ++c)
        if (2 * t > g.sizes[c]) throw std::invalid_argument("need 2t <= n_j in every class");

    BoxAttempt at;
    at.diag.seed = attempt_seed;
    Rng rng(attempt_seed);
    std::vector<std::vector<int>> w(k);
    for (int c = 0; c < k; ++c) w[c] = rng.subset(g.sizes[c], 2 * t);

    auto edges = induced_edges(g, w, col.colour, nullptr);
    at.diag.x_j = conflict_table(edges, k);

    // one deletion per conflict pair still alive, deterministic choice
    std::vector<std::vector<char>> alive(k);
    for (int c = 0; c < k; ++c) alive[c].assign(w[c].size(), 1);
    auto edge_alive = [&](const InducedEdge& e) {
        for (int c = 0; c < k; ++c)
            if (!alive[c][e.local[c]]) return false;
        return true;
    };
    std::map<int, std::vector<const InducedEdge*>> buckets;
    for (const auto& e : edges) buckets[e.colour].push_back(&e);
    for (const auto& [colour, bucket] : buckets) {
        for (std::size_t a = 0; a < bucket.size(); ++a)
            for (std::size_t b = a + 1; b < bucket.size(); ++b) {
                if (!edge_alive(*bucket[a]) || !edge_alive(*bucket[b])) continue;
                for (int c = 0; c < k; ++c) {
                    int va = bucket[a]->local[c], vb = bucket[b]->local[c];
                    if (va == vb) continue;
                    // lowest differing class; lower vertex id of the two
                    int victim = w[c][va] < w[c][vb] ? va : vb;
                    alive[c][victim] = 0;
                    ++at.diag.deletions;
                    break;
                }
            }
    }

    SubBox box;
    box.cls.resize(k);
    for (int c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < w[c].size(); ++i)
            if (alive[c][i] && static_cast<int>(box.cls[c].size()) < t)
                box.cls[c].push_back(w[c][i]);
        if (static_cast<int>(box.cls[c].size()) < t) return at; // class wiped out
    }
    if (!verify_rainbow(col, box)) return at;
    at.result = RainbowResult{std::move(box), {}, at.diag};
    return at;
}

SampleOutcome sample_rainbow_box(const Colouring& col, const DeltaVec& dv, int t,
                                 std::uint64_t seed, int max_retries) {
    dv.validate();
    if (dv.k() != col.grid.k) throw std::invalid_argument("delta vector length must equal k");
    SampleOutcome out;
    out.feasible = check_simplerain(dv, t, col.grid.sizes);
    if (!out.feasible) out.note = "delta vector misses the sampling regime (advisory)";
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        BoxAttempt at = attempt_rainbow_box(col, t, derive_seed(seed, attempt));
        at.diag.attempt = attempt;
        out.attempts = attempt;
        out.total_conflicts += at.diag.conflict_total();
        out.total_deletions += at.diag.deletions;
        if (at.result) {
            at.result->diag = at.diag;
            out.result = std::move(at.result);
            return out;
        }
    }
    return out;
}

BoxAttempt attempt_rainbow_dense(const PartiteHypergraph& h, const Colouring& col, int m,
                                 std::uint64_t attempt_seed) {
    const Grid& g = h.grid;
    if (col.grid != g) throw std::invalid_argument("colouring grid must match hypergraph");
    const int k = g.k;
    for (int c = 0; c < k; ++c)
        if (m > g.sizes[c]) throw std::invalid_argument("need m <= n_j in every class");

    BoxAttempt at;
    at.diag.seed = attempt_seed;
    Rng rng(attempt_seed);
    std::vector<std::vector<int>> w(k);
    for (int c = 0; c < k; ++c) w[c] = rng.subset(g.sizes[c], m);

    auto edges = induced_edges(g, w, col.colour, &h.present);
    at.diag.y = edges.size();
    at.diag.x_j = conflict_table(edges, k);
    if (at.diag.conflict_total() != 0) return at;

    // Y >= d*m^k/2 with d = |E|/cells, exactly
    BigInt lhs = BigInt(at.diag.y) * 2 * g.cells;
    BigInt rhs = BigInt(h.edge_count) * int_pow(m, static_cast<std::uint64_t>(k));
    if (lhs < rhs) return at;

    SubBox box;
    box.cls = w;
    RainbowResult res;
    res.box = std::move(box);
    res.surviving_edges.reserve(edges.size());
    for (const auto& e : edges) res.surviving_edges.push_back(e.flat);
    res.diag = at.diag;
    at.result = std::move(res);
    return at;
}

SampleOutcome sample_rainbow_dense(const PartiteHypergraph& h, const Colouring& col, int m,
                                   std::uint64_t seed, int max_retries, const DeltaVec* dv) {
    SampleOutcome out;
    if (h.edge_count == 0) {
        out.feasible = false;
        out.note = "hypergraph is empty: density precondition d > 0 fails";
        return out;
    }
    // advisory regime: 2^{k+3}/d <= m <= min n_j and delta_j < 1/(2^{k+1} m^{2k-j})
    const int k = h.grid.k;
    BigRat d = density(h);
    std::string why;
    if (BigRat(m) * d < BigRat(int_pow(2, static_cast<std::uint64_t>(k + 3))))
        why = "m below 2^{k+3}/d";
    for (int c = 0; c < k && why.empty(); ++c)
        if (m > h.grid.sizes[c]) why = "m exceeds a class size";
    if (dv && why.empty()) {
        if (dv->k() != k) throw std::invalid_argument("delta vector length must equal k");
        dv->validate();
        for (int j = 0; j < k && why.empty(); ++j) {
            BigInt scale = int_pow(2, static_cast<std::uint64_t>(k + 1)) *
                           int_pow(m, static_cast<std::uint64_t>(2 * k - j));
            if (numerator(dv->deltas[j]) * scale >= denominator(dv->deltas[j]))
                why = "delta_" + std::to_string(j) + " too large for m";
        }
    }
    if (!why.empty()) {
        out.feasible = false;
        out.note = why + " (advisory)";
    }
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        BoxAttempt at = attempt_rainbow_dense(h, col, m, derive_seed(seed, attempt));
        at.diag.attempt = attempt;
        out.attempts = attempt;
        out.total_conflicts += at.diag.conflict_total();
        if (at.result) {
            at.result->diag = at.diag;
            out.result = std::move(at.result);
            return out;
        }
    }
    return out;
}

bool verify_rainbow(const Colouring& col, const SubBox& box) {
    std::vector<char> seen;
    std::vector<int> local(box.k(), 0), coords(box.k());
    for (int c = 0; c < box.k(); ++c) coords[c] = box.cls[c][0];
    for (;;) {
        int colour = col.at(coords);
        if (colour >= static_cast<int>(seen.size())) seen.resize(colour + 1, 0);
        if (seen[colour]) return false;
        seen[colour] = 1;
        int c = box.k() - 1;
        while (c >= 0) {
            if (++local[c] < static_cast<int>(box.cls[c].size())) {
                coords[c] = box.cls[c][local[c]];
                break;
            }
            local[c] = 0;
            coords[c] = box.cls[c][0];
            --c;
        }
        if (c < 0) return true;
    }
}

bool verify_rainbow(const Colouring& col, const std::vector<std::uint64_t>& edges) {
    std::vector<char> seen;
    for (std::uint64_t f : edges) {
        int colour = col.at(f);
        if (colour >= static_cast<int>(seen.size())) seen.resize(colour + 1, 0);
        if (seen[colour]) return false;
        seen[colour] = 1;
    }
    return true;
}

void write_diagnostics(const SampleDiagnostics& diag, int k, bool structured, std::ostream& out) {
    if (structured) {
        out << "attempt " << diag.attempt << " seed=" << diag.seed << " deletions="
            << diag.deletions << " Y=" << diag.y;
        for (JSet j = 0; j < diag.x_j.size(); ++j)
            if (diag.x_j[j]) out << " X" << jset_name(j, k) << "=" << diag.x_j[j];
        out << '\n';
    } else {
        out << "attempt " << diag.attempt << " (seed " << diag.seed << "): " << diag.deletions
            << " deletion(s), " << diag.y << " induced edge(s)\n";
        for (JSet j = 0; j < diag.x_j.size(); ++j)
            if (diag.x_j[j])
                out << "  conflicts agreeing on " << jset_name(j, k) << ": " << diag.x_j[j]
                    << '\n';
    }
}

} // namespace phc

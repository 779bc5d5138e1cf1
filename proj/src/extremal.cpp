#include "phc/extremal.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace phc {

void ExtremalInstance::validate() const {
    if (static_cast<int>(t.size()) != h.grid.k)
        throw std::invalid_argument("t arity must equal k");
    for (int c = 0; c < h.grid.k; ++c)
        if (t[c] < 1 || t[c] > h.grid.sizes[c])
            throw std::invalid_argument("need 1 <= t_j <= n_j");
}

BigRat density(const PartiteHypergraph& h) {
    return BigRat(BigInt(h.edge_count), BigInt(h.grid.cells));
}

namespace {

// The active cell set of the sub-grid on classes 1..level+1 is a dense char
// buffer, row-major with class level+1 fastest; intersecting the slices of a
// class-(level+1) vertex subset yields the buffer one level down.
struct Descent {
    const std::vector<int>& dims;
    const std::vector<int>& t;
    Budget& budget;
    std::vector<std::vector<char>> buf;

    Descent(const std::vector<int>& dims, const std::vector<int>& t, Budget& budget)
        : dims(dims), t(t), budget(budget), buf(dims.size()) {}

    // fills buf[level-1] with the AND of the selected class-level slices
    bool intersect(const std::vector<char>& cur, int level, const std::vector<int>& sel) {
        int n = dims[level];
        std::uint64_t b_count = cur.size() / n;
        auto& nxt = buf[level - 1];
        nxt.resize(b_count);
        bool any = false;
        for (std::uint64_t b = 0; b < b_count; ++b) {
            char a = 1;
            const char* row = cur.data() + b * n;
            for (int v : sel) a = static_cast<char>(a & row[v]);
            nxt[b] = a;
            any |= a != 0;
        }
        return any;
    }

    BigInt count(const std::vector<char>& cur, int level) {
        if (level == 0) {
            budget.tick("box counting");
            std::uint64_t m = 0;
            for (char c : cur) m += c != 0;
            return binomial(m, static_cast<std::uint64_t>(t[0]));
        }
        int n = dims[level], tc = t[level];
        BigInt total = 0;
        std::vector<int> sel(tc);
        for (int i = 0; i < tc; ++i) sel[i] = i;
        for (;;) {
            budget.tick("box counting");
            if (intersect(cur, level, sel)) total += count(buf[level - 1], level - 1);
            int i = tc - 1;
            while (i >= 0 && sel[i] == n - tc + i) --i;
            if (i < 0) break;
            ++sel[i];
            for (int l = i + 1; l < tc; ++l) sel[l] = sel[l - 1] + 1;
        }
        return total;
    }

    // enumerates complete boxes; chosen[level] holds the current selection
    bool walk(const std::vector<char>& cur, int level, std::vector<std::vector<int>>& chosen,
              const std::function<bool(const std::vector<std::vector<int>>&)>& fn) {
        if (level == 0) {
            budget.tick("box enumeration");
            std::vector<int> ones;
            for (std::size_t v = 0; v < cur.size(); ++v)
                if (cur[v]) ones.push_back(static_cast<int>(v));
            int tc = t[0], m = static_cast<int>(ones.size());
            if (m < tc) return true;
            std::vector<int> sel(tc);
            for (int i = 0; i < tc; ++i) sel[i] = i;
            for (;;) {
                chosen[0].resize(tc);
                for (int i = 0; i < tc; ++i) chosen[0][i] = ones[sel[i]];
                if (!fn(chosen)) return false;
                int i = tc - 1;
                while (i >= 0 && sel[i] == m - tc + i) --i;
                if (i < 0) return true;
                ++sel[i];
                for (int l = i + 1; l < tc; ++l) sel[l] = sel[l - 1] + 1;
            }
        }
        int n = dims[level], tc = t[level];
        std::vector<int> sel(tc);
        for (int i = 0; i < tc; ++i) sel[i] = i;
        for (;;) {
            budget.tick("box enumeration");
            if (intersect(cur, level, sel)) {
                chosen[level] = sel;
                if (!walk(buf[level - 1], level - 1, chosen, fn)) return false;
            }
            int i = tc - 1;
            while (i >= 0 && sel[i] == n - tc + i) --i;
            if (i < 0) return true;
            ++sel[i];
            for (int l = i + 1; l < tc; ++l) sel[l] = sel[l - 1] + 1;
        }
    }
};

} // namespace

BigInt count_complete_boxes(const ExtremalInstance& inst, Budget& budget) {
    inst.validate();
    Descent d(inst.h.grid.sizes, inst.t, budget);
    return d.count(inst.h.present, inst.h.grid.k - 1);
}

AssumptionReport assumption_holds(const ExtremalInstance& inst) {
    inst.validate();
    const int k = inst.h.grid.k;
    AssumptionReport rep;
    rep.per_class.assign(k, false);
    if (inst.h.edge_count == 0) {
        rep.diagnostic = "density is zero";
        return rep;
    }
    const BigInt e = inst.h.edge_count;
    const BigInt base = BigInt(inst.h.grid.cells) * int_pow(4, static_cast<std::uint64_t>(k - 1));
    std::uint64_t exp = 1; // prod_{j<i} t_j, empty product
    rep.holds = true;
    for (int i = 0; i < k; ++i) {
        if (i > 0) {
            exp *= static_cast<std::uint64_t>(inst.t[i - 1]);
            if (exp > 1'000'000) throw std::invalid_argument("t too large for exact evaluation");
        }
        // (d/4^{k-1})^exp * n_i >= 2 t_i with d = e/cells
        BigInt lhs = int_pow(e, exp) * inst.h.grid.sizes[i];
        BigInt rhs = BigInt(2) * inst.t[i] * int_pow(base, exp);
        rep.per_class[i] = lhs >= rhs;
        rep.holds = rep.holds && rep.per_class[i];
    }
    return rep;
}

BigRat count_lower_bound(const ExtremalInstance& inst) {
    inst.validate();
    const int k = inst.h.grid.k;
    if (inst.h.edge_count == 0) return BigRat(0);
    std::uint64_t exp = 1;
    for (int c = 0; c < k; ++c) {
        exp *= static_cast<std::uint64_t>(inst.t[c]);
        if (exp > 1'000'000) throw std::invalid_argument("t too large for exact evaluation");
    }
    BigRat ratio(BigInt(inst.h.edge_count),
                 BigInt(inst.h.grid.cells) * int_pow(2, static_cast<std::uint64_t>(2 * k - 1)));
    BigRat bound = rat_pow(ratio, exp);
    for (int c = 0; c < k; ++c)
        bound *= BigRat(binomial(static_cast<std::uint64_t>(inst.h.grid.sizes[c]),
                                 static_cast<std::uint64_t>(inst.t[c])));
    return bound;
}

std::vector<LinkCount> link_counts(const ExtremalInstance& inst, Budget& budget) {
    inst.validate();
    const int k = inst.h.grid.k;
    if (k < 2) throw std::invalid_argument("links need k >= 2");
    const int nk = inst.h.grid.sizes[k - 1];
    const std::uint64_t b_count = inst.h.grid.cells / static_cast<std::uint64_t>(nk);
    std::vector<int> link_dims(inst.h.grid.sizes.begin(), inst.h.grid.sizes.end() - 1);
    std::vector<int> link_t(inst.t.begin(), inst.t.end() - 1);

    std::vector<LinkCount> out;
    std::vector<char> link(b_count);
    for (int v = 0; v < nk; ++v) {
        LinkCount lc;
        lc.vertex = v;
        for (std::uint64_t b = 0; b < b_count; ++b) {
            link[b] = inst.h.present[b * nk + v];
            lc.link_edges += link[b] != 0;
        }
        lc.heavy = 2 * static_cast<std::uint64_t>(nk) * lc.link_edges >= inst.h.edge_count;
        Descent d(link_dims, link_t, budget);
        lc.boxes = d.count(link, k - 2);
        out.push_back(std::move(lc));
    }
    return out;
}

bool box_is_complete(const PartiteHypergraph& h, const SubBox& box) {
    if (box.k() != h.grid.k) return false;
    std::vector<std::size_t> local(box.k(), 0);
    std::vector<int> coords(box.k());
    for (int c = 0; c < box.k(); ++c) {
        if (box.cls[c].empty() || box.cls[c].back() >= h.grid.sizes[c]) return false;
        coords[c] = box.cls[c][0];
    }
    for (;;) {
        if (!h.has(coords)) return false;
        int c = box.k() - 1;
        while (c >= 0) {
            if (++local[c] < box.cls[c].size()) {
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

void for_each_complete_box(const PartiteHypergraph& h, const std::vector<int>& t, Budget& budget,
                           const std::function<bool(const SubBox&)>& fn) {
    ExtremalInstance inst{h, t};
    inst.validate();
    Descent d(h.grid.sizes, t, budget);
    std::vector<std::vector<int>> chosen(h.grid.k);
    SubBox box;
    box.cls.resize(h.grid.k);
    d.walk(h.present, h.grid.k - 1, chosen, [&](const std::vector<std::vector<int>>& sel) {
        box.cls = sel;
        return fn(box);
    });
}

namespace {

std::optional<SubBox> extract_exhaustive(const ExtremalInstance& inst, Budget& budget) {
    std::optional<SubBox> found;
    for_each_complete_box(inst.h, inst.t, budget, [&](const SubBox& box) {
        found = box;
        return false;
    });
    return found;
}

std::optional<SubBox> extract_proof_guided(const ExtremalInstance& inst, Budget& budget) {
    const int k = inst.h.grid.k;
    if (k == 1) return extract_exhaustive(inst, budget);
    const int nk = inst.h.grid.sizes[k - 1];
    const int tk = inst.t[k - 1];
    const std::uint64_t b_count = inst.h.grid.cells / static_cast<std::uint64_t>(nk);
    std::vector<int> link_dims(inst.h.grid.sizes.begin(), inst.h.grid.sizes.end() - 1);
    std::vector<int> link_t(inst.t.begin(), inst.t.end() - 1);

    // tally: flattened (k-1)-box -> class-k vertices extending it
    std::map<std::vector<int>, std::vector<int>> tally;
    PartiteHypergraph link;
    link.grid = Grid(link_dims);
    std::vector<int> key;
    for (int v = 0; v < nk; ++v) {
        link.present.assign(b_count, 0);
        link.edge_count = 0;
        for (std::uint64_t b = 0; b < b_count; ++b) {
            link.present[b] = inst.h.present[b * nk + v];
            link.edge_count += link.present[b] != 0;
        }
        if (2 * static_cast<std::uint64_t>(nk) * link.edge_count < inst.h.edge_count) continue;
        for_each_complete_box(link, link_t, budget, [&](const SubBox& lb) {
            key.clear();
            for (const auto& u : lb.cls) key.insert(key.end(), u.begin(), u.end());
            budget.tick("box tally");
            tally[key].push_back(v);
            return true;
        });
    }

    for (const auto& [flat, extenders] : tally) {
        if (static_cast<int>(extenders.size()) < tk) continue;
        SubBox box;
        box.cls.resize(k);
        std::size_t pos = 0;
        for (int c = 0; c + 1 < k; ++c) {
            box.cls[c].assign(flat.begin() + pos, flat.begin() + pos + link_t[c]);
            pos += static_cast<std::size_t>(link_t[c]);
        }
        box.cls[k - 1].assign(extenders.begin(), extenders.begin() + tk);
        if (!box_is_complete(inst.h, box))
            throw std::logic_error("tallied box failed completeness verification");
        return box;
    }
    return std::nullopt;
}

} // namespace

std::optional<SubBox> extract_complete_box(const ExtremalInstance& inst, ExtractMode mode,
                                           Budget& budget) {
    inst.validate();
    auto box = mode == ExtractMode::exhaustive ? extract_exhaustive(inst, budget)
                                               : extract_proof_guided(inst, budget);
    if (box && !box_is_complete(inst.h, *box))
        throw std::logic_error("extracted box failed completeness verification");
    return box;
}

} // namespace phc

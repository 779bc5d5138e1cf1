#pragma once

#include "phc/core.hpp"
#include "phc/rng.hpp"

#include <map>
#include <set>
#include <vector>

namespace phc::testing {

// all restricted-growth strings of the given length
inline std::vector<std::vector<int>> all_rgs(int len) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(len, 0);
    auto rec = [&](auto&& self, int pos, int mx) -> void {
        if (pos == len) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= mx + 1; ++c) {
            cur[pos] = c;
            self(self, pos + 1, std::max(mx, c));
        }
    };
    rec(rec, 0, -1);
    return out;
}

// independent canonicity oracle: partition the box's edges by J-restriction,
// demand one colour per fiber and pairwise distinct fiber colours
inline std::vector<JSet> fiber_partition_jsets(const Colouring& col, const SubBox& box) {
    std::vector<JSet> out;
    const int k = box.k();
    std::vector<std::vector<int>> edges;
    std::vector<int> idx(k, 0);
    for (;;) {
        std::vector<int> e(k);
        for (int c = 0; c < k; ++c) e[c] = box.cls[c][idx[c]];
        edges.push_back(e);
        int c = k - 1;
        while (c >= 0 && ++idx[c] == static_cast<int>(box.cls[c].size())) idx[c--] = 0;
        if (c < 0) break;
    }
    for (JSet j : all_jsets(k)) {
        std::map<std::vector<int>, std::set<int>> fibers;
        for (const auto& e : edges) fibers[restrict_edge(e, j)].insert(col.at(e));
        bool ok = true;
        std::set<int> used;
        for (const auto& [key, cols] : fibers) {
            if (cols.size() != 1 || !used.insert(*cols.begin()).second) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(j);
    }
    return out;
}

inline Colouring random_colouring(Rng& rng, const std::vector<int>& sizes, int palette) {
    Colouring col;
    col.grid = Grid(sizes);
    col.palette = palette;
    col.colour.resize(col.grid.cells);
    for (auto& c : col.colour) c = static_cast<int>(rng.below(palette));
    return col;
}

inline SubBox full_box(const Grid& g) {
    SubBox box;
    box.cls.resize(g.k);
    for (int c = 0; c < g.k; ++c)
        for (int v = 0; v < g.sizes[c]; ++v) box.cls[c].push_back(v);
    return box;
}

inline Colouring from_rgs(const std::vector<int>& rgs, const std::vector<int>& sizes) {
    Colouring col;
    col.grid = Grid(sizes);
    col.colour = rgs;
    for (int c : rgs) col.palette = std::max(col.palette, c + 1);
    return col;
}

} // namespace phc::testing

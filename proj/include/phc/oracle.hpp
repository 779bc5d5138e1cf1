#pragma once

#include "phc/core.hpp"
#include "phc/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace phc {

struct SearchStats {
    std::uint64_t nodes = 0;  // edge-colour assignments explored
    std::uint64_t leaves = 0; // fully coloured strings reached
    std::uint64_t pruned = 0; // branches cut by a canonical box
    std::uint64_t checks = 0; // box canonicity tests run
};

struct SearchOptions {
    bool prune = true;
    bool stop_at_first = true; // stop once one avoider is found
    std::ostream* journal = nullptr;
    std::uint64_t checkpoint_interval = 0;               // nodes, 0 = off
    std::vector<std::vector<int>>* collect = nullptr;    // avoider growth strings
};

// DFS over restricted-growth strings: colour(edge i) <= 1 + max colour of
// earlier edges, so each colour partition appears exactly once. With pruning
// on, a branch dies the moment some fully coloured t-box is canonical.
struct AvoiderSearchState {
    Grid grid;
    std::vector<int> rgs; // colour per edge in row-major order
    std::size_t frontier = 0;
    SearchStats stats;
};

std::optional<Colouring> avoider_search(int k, int t, int n, Budget& budget,
                                        const SearchOptions& opts = {},
                                        SearchStats* stats_out = nullptr);

struct ErScan {
    std::optional<int> value;                      // smallest n with no avoider
    bool budget_hit = false;
    bool confirmed_next = false;                   // no-avoider re-verified at value+1
    std::vector<std::pair<int, bool>> avoider_at;  // (n, avoider exists)
};

ErScan er_scan(int k, int t, int n_max, Budget& budget, const SearchOptions& opts = {});

inline std::optional<int> er_number(int k, int t, int n_max, Budget& budget,
                                    const SearchOptions& opts = {}) {
    return er_scan(k, t, n_max, budget, opts).value;
}

struct ExperimentRecord {
    int k = 0;
    int t = 0;
    int n = 0;
    int palette = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t hits = 0;   // canonical copy found
    std::uint64_t misses = 0;

    double hit_rate() const;
    double ci_radius() const; // 95% normal approximation
};

ExperimentRecord random_lb_experiment(int k, int t, int n, int palette, std::uint64_t trials,
                                      std::uint64_t seed);

void write_experiment(const ExperimentRecord& rec, std::ostream& out);

} // namespace phc

#include "phc/oracle.hpp"

#include "phc/rng.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace phc {

namespace {

// flat id of a box's row-major-last edge: the max vertex of every class
std::uint64_t last_edge_of(const Grid& g, const SubBox& box) {
    std::vector<int> coords(g.k);
    for (int c = 0; c < g.k; ++c) coords[c] = box.cls[c].back();
    return g.flat(coords);
}

struct Searcher {
    Grid grid;
    int t;
    Budget& budget;
    const SearchOptions& opts;
    Colouring col;
    AvoiderSearchState state;
    std::vector<std::vector<SubBox>> boxes_by_last;
    std::optional<Colouring> found;

    Searcher(int k, int t_, int n, Budget& b, const SearchOptions& o)
        : grid(std::vector<int>(k, n)), t(t_), budget(b), opts(o) {
        col.grid = grid;
        col.colour.assign(grid.cells, -1);
        state.grid = grid;
        state.rgs.assign(grid.cells, -1);
        boxes_by_last.resize(grid.cells);
        if (n >= t) {
            BoxEnumerator be(grid.sizes, std::vector<int>(grid.k, t));
            SubBox box;
            while (be.next(box)) boxes_by_last[last_edge_of(grid, box)].push_back(box);
        }
    }

    bool box_canonical_here(std::uint64_t edge) {
        for (const SubBox& box : boxes_by_last[edge]) {
            ++state.stats.checks;
            if (!classify_box(col, box).empty()) return true;
        }
        return false;
    }

    bool leaf_is_avoider() {
        for (std::uint64_t e = 0; e < grid.cells; ++e)
            if (!boxes_by_last[e].empty() && box_canonical_here(e)) return false;
        return true;
    }

    void checkpoint() {
        if (!opts.journal || opts.checkpoint_interval == 0) return;
        if (state.stats.nodes % opts.checkpoint_interval != 0) return;
        std::ostream& out = *opts.journal;
        out << "checkpoint nodes=" << state.stats.nodes << " leaves=" << state.stats.leaves
            << " pruned=" << state.stats.pruned << " checks=" << state.stats.checks
            << " frontier=";
        for (std::size_t i = 0; i < state.frontier; ++i) {
            if (i) out << ',';
            out << state.rgs[i];
        }
        out << '\n';
    }

    void take_leaf() {
        ++state.stats.leaves;
        if (!opts.prune && !leaf_is_avoider()) return;
        if (opts.collect) opts.collect->push_back(state.rgs);
        if (!found) {
            Colouring c = col;
            c.palette = 0;
            for (int v : c.colour) c.palette = std::max(c.palette, v + 1);
            found = std::move(c);
        }
    }

    // returns true to stop the whole search
    bool dfs(std::size_t pos, int max_colour) {
        if (pos == grid.cells) {
            take_leaf();
            return found && opts.stop_at_first;
        }
        for (int c = 0; c <= max_colour + 1; ++c) {
            budget.tick("avoider_search");
            ++state.stats.nodes;
            state.rgs[pos] = c;
            col.colour[pos] = c;
            state.frontier = pos + 1;
            checkpoint();
            if (opts.prune && box_canonical_here(pos)) {
                ++state.stats.pruned;
            } else if (dfs(pos + 1, std::max(max_colour, c))) {
                return true;
            }
        }
        state.rgs[pos] = -1;
        col.colour[pos] = -1;
        state.frontier = pos;
        return false;
    }

    void run() {
        if (grid.cells == 0) return;
        dfs(0, -1);
    }
};

} // namespace

std::optional<Colouring> avoider_search(int k, int t, int n, Budget& budget,
                                        const SearchOptions& opts, SearchStats* stats_out) {
    if (k < 1 || t < 1 || n < 1) throw std::invalid_argument("avoider_search needs k,t,n >= 1");
    Searcher s(k, t, n, budget, opts);
    s.run();
    if (stats_out) *stats_out = s.state.stats;
    return s.found;
}

ErScan er_scan(int k, int t, int n_max, Budget& budget, const SearchOptions& opts) {
    ErScan scan;
    try {
        for (int n = 1; n <= n_max; ++n) {
            bool exists = avoider_search(k, t, n, budget, opts).has_value();
            scan.avoider_at.push_back({n, exists});
            if (!exists) {
                scan.value = n;
                if (!budget.exhausted()) {
                    bool above = avoider_search(k, t, n + 1, budget, opts).has_value();
                    scan.avoider_at.push_back({n + 1, above});
                    if (above)
                        throw std::logic_error("avoider reappeared above the threshold");
                    scan.confirmed_next = true;
                }
                return scan;
            }
        }
    } catch (const BudgetExceeded&) {
        scan.budget_hit = true;
        scan.value.reset();
    }
    return scan;
}

double ExperimentRecord::hit_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
}

double ExperimentRecord::ci_radius() const {
    if (trials == 0) return 0.0;
    double p = hit_rate();
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

ExperimentRecord random_lb_experiment(int k, int t, int n, int palette, std::uint64_t trials,
                                      std::uint64_t seed) {
    if (k < 1 || t < 1 || n < 1) throw std::invalid_argument("experiment needs k,t,n >= 1");
    if (palette < 1) throw std::invalid_argument("palette must be >= 1");
    ExperimentRecord rec{k, t, n, palette, trials, seed, 0, 0};
    Colouring col;
    col.grid = Grid(std::vector<int>(k, n));
    col.palette = palette;
    col.colour.assign(col.grid.cells, 0);
    std::vector<int> tv(k, t);
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng(derive_seed(seed, i));
        for (auto& c : col.colour) c = static_cast<int>(rng.below(palette));
        Budget unlimited;
        if (find_canonical_copy_exhaustive(col, tv, unlimited))
            ++rec.hits;
        else
            ++rec.misses;
    }
    return rec;
}

void write_experiment(const ExperimentRecord& rec, std::ostream& out) {
    out << "experiment k=" << rec.k << " t=" << rec.t << " n=" << rec.n
        << " palette=" << rec.palette << " trials=" << rec.trials << " seed=" << rec.seed
        << '\n';
    out << "outcome hits=" << rec.hits << " misses=" << rec.misses
        << " hit_rate=" << rec.hit_rate() << " ci95=" << rec.ci_radius() << '\n';
}

} // namespace phc

#pragma once

#include "phc/core.hpp"
#include "phc/errors.hpp"
#include "phc/numeric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace phc {

// hypergraph together with target box dimensions t_1..t_k
struct ExtremalInstance {
    PartiteHypergraph h;
    std::vector<int> t;

    void validate() const;
};

BigRat density(const PartiteHypergraph& h);

// exact number of complete t_1 x ... x t_k sub-boxes whose edges all lie in h
BigInt count_complete_boxes(const ExtremalInstance& inst, Budget& budget);

struct AssumptionReport {
    bool holds = false;
    std::vector<bool> per_class; // inequality (d/4^{k-1})^{prod_{j<i} t_j} n_i >= 2 t_i
    std::string diagnostic;
};

AssumptionReport assumption_holds(const ExtremalInstance& inst);

// (d/2^{2k-1})^{prod t_j} * prod C(n_j, t_j), exact
BigRat count_lower_bound(const ExtremalInstance& inst);

struct LinkCount {
    int vertex = 0;  // class-k vertex
    std::uint64_t link_edges = 0;
    BigInt boxes;    // complete (k-1)-boxes in the link
    bool heavy = false;
};

// per class-k vertex: link size, box count, heavy flag (2 n_k e(H(v)) >= |E|)
std::vector<LinkCount> link_counts(const ExtremalInstance& inst, Budget& budget);

enum class ExtractMode { proof_guided, exhaustive };

// Proof-guided mode tallies complete (k-1)-boxes across heavy class-k
// vertices and picks one shared by >= t_k of them; exhaustive mode is a
// complete depth-first search. Results are verified complete before return.
std::optional<SubBox> extract_complete_box(const ExtremalInstance& inst, ExtractMode mode,
                                           Budget& budget);

bool box_is_complete(const PartiteHypergraph& h, const SubBox& box);

// visits every complete box; fn returning false stops the walk
void for_each_complete_box(const PartiteHypergraph& h, const std::vector<int>& t, Budget& budget,
                           const std::function<bool(const SubBox&)>& fn);

} // namespace phc

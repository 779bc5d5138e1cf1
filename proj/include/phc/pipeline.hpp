#pragma once

#include "phc/boundedness.hpp"
#include "phc/core.hpp"
#include "phc/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace phc {

struct PipelineTrace {
    std::string branch;                 // bounded / jstar=0 / jstar=1-equal / ...
    std::optional<int> j_star;
    std::optional<JSet> j_star_witness;
    std::vector<std::string> lines;     // key=value details, replay-sufficient
    std::vector<std::string> anomalies;

    void note(const std::string& key, const std::string& value);
};

struct PipelineFailure {
    std::string branch;
    std::string step;   // heavy-set / split / sampling / extraction / ...
    std::string reason;
    bool budget = false;
};

struct PipelineOutcome {
    std::optional<CanonicalWitness> witness;
    std::optional<PipelineFailure> failure;
    PipelineTrace trace;
};

// The case analysis: delta-bounded colourings go to the rainbow sampler;
// otherwise the minimal unbounded level j* picks the monochromatic (j*=0),
// box-principle (j*=1) or auxiliary-hypergraph (j*>=2) branch. Witnesses are
// re-verified against the colouring before being returned.
PipelineOutcome find_canonical_copy(const Colouring& col, int t, const DeltaVec& dv,
                                    std::uint64_t seed, Budget& budget, int max_retries);

// k-uniform extension of base tuples on the classes of j_set: all edges e
// with e_J equal to a base and colour equal to that base's colour.
PartiteHypergraph build_star(const Colouring& col, JSet j_set,
                             const std::vector<std::pair<std::vector<int>, int>>& bases);

struct SplitItem {
    int id = 0;
    int colour = 0;
    bool operator==(const SplitItem&) const = default;
};

struct SplitResult {
    enum class Kind { equal, distinct, failure } kind = Kind::failure;
    std::vector<SplitItem> members;
};

// Pigeonhole split: a colour class of size >= threshold (largest, then
// smallest colour) trimmed to the first threshold items, else one
// representative per colour; fewer than threshold representatives fail.
SplitResult box_principle_split(const std::vector<SplitItem>& items, std::int64_t threshold);

void write_trace(const PipelineOutcome& outcome, std::ostream& out);

} // namespace phc

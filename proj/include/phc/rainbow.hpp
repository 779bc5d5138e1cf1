#pragma once

#include "phc/boundedness.hpp"
#include "phc/core.hpp"
#include "phc/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phc {

struct SampleDiagnostics {
    std::vector<std::uint64_t> x_j; // conflict pairs per exact agreement set, indexed by JSet
    std::uint64_t y = 0;            // induced edge count (dense runs)
    int attempt = 0;                // 1-based attempt index
    std::uint64_t deletions = 0;
    std::uint64_t seed = 0;         // per-attempt derived seed

    std::uint64_t conflict_total() const;
};

struct RainbowResult {
    SubBox box;
    std::vector<std::uint64_t> surviving_edges; // ambient flat ids (dense runs only)
    SampleDiagnostics diag;
};

struct SampleOutcome {
    std::optional<RainbowResult> result;
    int attempts = 0;                  // attempts consumed
    std::uint64_t total_conflicts = 0; // sum of all X_J over attempts
    std::uint64_t total_deletions = 0;
    bool feasible = true;              // advisory regime checks
    std::string note;
};

// delta_j <= 1/(2^{3k-j} t^{2k-j-1}) for every level j, exact
bool check_simplerain(const DeltaVec& dv, int t, const std::vector<int>& sizes);

// One sampling round: uniform W_i of size 2t per class, conflict census on
// the induced box, one vertex deleted per conflict pair (lowest differing
// class, then lowest vertex id), success if t vertices per class survive and
// the trimmed box is rainbow.
struct BoxAttempt {
    SampleDiagnostics diag;
    std::optional<RainbowResult> result;
};
BoxAttempt attempt_rainbow_box(const Colouring& col, int t, std::uint64_t attempt_seed);

SampleOutcome sample_rainbow_box(const Colouring& col, const DeltaVec& dv, int t,
                                 std::uint64_t seed, int max_retries);

// One dense round: uniform W_i of size m, accept iff the induced
// subhypergraph has zero same-colour pairs and at least d*m^k/2 edges.
BoxAttempt attempt_rainbow_dense(const PartiteHypergraph& h, const Colouring& col, int m,
                                 std::uint64_t attempt_seed);

// dv, when supplied, feeds the advisory regime check (never blocks sampling)
SampleOutcome sample_rainbow_dense(const PartiteHypergraph& h, const Colouring& col, int m,
                                   std::uint64_t seed, int max_retries,
                                   const DeltaVec* dv = nullptr);

bool verify_rainbow(const Colouring& col, const SubBox& box);
bool verify_rainbow(const Colouring& col, const std::vector<std::uint64_t>& edges);

void write_diagnostics(const SampleDiagnostics& diag, int k, bool structured, std::ostream& out);

} // namespace phc

#pragma once

#include "phc/core.hpp"
#include "phc/numeric.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace phc {

// delta vector (delta_0, ..., delta_{k-1}), exact rationals in (0,1]
struct DeltaVec {
    std::vector<BigRat> deltas;

    int k() const { return static_cast<int>(deltas.size()); }
    void validate() const;
};

// Per-tuple colour fiber counts for one J. S-tuples are indexed row-major
// over the classes in J (ascending), the last one varying fastest.
struct FiberStats {
    JSet j_set = 0;
    BigRat delta;
    std::vector<int> j_sizes;                         // sizes of the classes in J
    std::uint64_t v_j = 1;                            // |V_J|
    std::uint64_t v_rest = 1;                         // |V_{[k]\J}|
    std::vector<std::map<int, std::uint64_t>> table;  // flat S -> (colour -> count)
    std::vector<std::uint64_t> bad_set;               // flat S failing the cap, ascending

    std::vector<int> s_coords(std::uint64_t flat_s) const;
};

// bad_set = tuples S with some colour fiber exceeding delta*|V_{[k]\J}|;
// exact rational threshold. J must be a proper subset of the classes.
FiberStats fiber_stats(const Colouring& col, JSet j_set, const BigRat& delta);

struct LevelVerdict {
    int level = 0;
    BigRat delta;
    bool bounded = false;
    std::optional<JSet> failing_j; // least failing J at this level, lexicographic
};

struct BoundednessReport {
    int k = 0;
    std::vector<LevelVerdict> levels;
    std::optional<int> j_star;          // minimal failing level
    std::optional<JSet> j_star_witness; // its lexicographically least failing J
    std::optional<FiberStats> witness_stats;

    bool bounded() const { return !j_star.has_value(); }
};

BoundednessReport is_bounded(const Colouring& col, const DeltaVec& dv);

// Unordered same-colour pairs of distinct edges, classified by their exact
// agreement set A = { j : e_j = e'_j }. Indexed by JSet; the full mask is 0.
struct ConflictCensus {
    int k = 0;
    std::vector<BigInt> pairs;

    BigInt total() const;
};

ConflictCensus conflict_census(const Colouring& col);

enum class BoundVerdict { holds, fails, inapplicable };

// Checks the conflict bound census[J] <= delta*|V_J|*|V_{[k]\J}|^2, provided
// the colouring is (delta,J)-bounded; otherwise inapplicable.
BoundVerdict check_bddJ_bound(const Colouring& col, JSet j_set, const BigRat& delta);

void write_boundedness_report(const BoundednessReport& report, bool structured,
                              std::ostream& out);
void write_census(const ConflictCensus& census, bool structured, std::ostream& out);

} // namespace phc

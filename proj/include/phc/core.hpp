#pragma once

#include "phc/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace phc {

// Ambient k-partite grid V_1 x ... x V_k. Edges are coordinate tuples,
// stored row-major with the last class varying fastest.
struct Grid {
    int k = 0;
    std::vector<int> sizes;

    std::uint64_t cells = 1;
    std::vector<std::uint64_t> stride;

    Grid() = default;
    explicit Grid(std::vector<int> sz);

    std::uint64_t flat(const std::vector<int>& coords) const;
    void coords_of(std::uint64_t flat, std::vector<int>& out) const;
    std::vector<int> coords_of(std::uint64_t flat) const;

    bool operator==(const Grid&) const = default;
};

// Complete colouring of a grid; palette colours are 0..palette-1.
struct Colouring {
    Grid grid;
    int palette = 0;
    std::vector<int> colour; // one entry per cell

    int at(std::uint64_t flat) const { return colour[flat]; }
    int at(const std::vector<int>& coords) const { return colour[grid.flat(coords)]; }
};

// k-partite k-uniform hypergraph on a grid: a subset of the cells.
struct PartiteHypergraph {
    Grid grid;
    std::vector<char> present; // one entry per cell
    std::uint64_t edge_count = 0;

    bool has(std::uint64_t flat) const { return present[flat] != 0; }
    bool has(const std::vector<int>& coords) const { return has(grid.flat(coords)); }
};

// Sub-box: one sorted vertex subset per class.
struct SubBox {
    std::vector<std::vector<int>> cls;

    int k() const { return static_cast<int>(cls.size()); }
    std::uint64_t edge_total() const;
    bool operator==(const SubBox&) const = default;
};

// Subset of classes as a bitmask; class j (1-based) sits at bit j-1.
using JSet = unsigned;

std::vector<int> jset_members(JSet j, int k);             // 1-based, ascending
std::string jset_name(JSet j, int k);                     // "{1,3}", "{}"
std::optional<JSet> parse_jset(const std::string& s, int k);
std::vector<JSet> all_jsets(int k);                       // ascending mask order
std::vector<JSet> jsets_of_size(int k, int size);         // lexicographic member order
inline int jset_size(JSet j) { return __builtin_popcount(j); }

// coordinates of e restricted to the classes in J, ascending
std::vector<int> restrict_edge(const std::vector<int>& coords, JSet j);

// Flat row-major index of e_J over the classes in J (ascending, last
// varying fastest); total() is |V_J|.
struct JProjector {
    std::vector<int> members;       // 0-based class ids
    std::vector<std::uint64_t> mul;

    JProjector(const Grid& grid, JSet j_set);
    std::uint64_t index(const std::vector<int>& coords) const;
    std::uint64_t total() const;

private:
    std::uint64_t total_ = 1;
};

// A J-canonical pattern on a box: colour depends exactly on the J-restriction.
struct CanonicalWitness {
    JSet j_set = 0;
    SubBox box;
    std::vector<std::pair<std::vector<int>, int>> fibers; // restriction -> colour, sorted
};

// Checks whether col restricted to box is J-canonical (same colour iff same
// J-restriction); returns the fiber map on success.
std::optional<CanonicalWitness> check_j_canonical(const Colouring& col, const SubBox& box,
                                                  JSet j_set);

// every J for which the box is J-canonical, ascending mask order
std::vector<JSet> classify_box(const Colouring& col, const SubBox& box);

// re-check a witness against a colouring, including its recorded fiber map
bool verify_witness(const Colouring& col, const CanonicalWitness& w);

// Enumerates sub-boxes with cls[j] a t[j]-subset of class j, the last class's
// combination varying fastest and combinations in lexicographic order.
class BoxEnumerator {
public:
    BoxEnumerator(const std::vector<int>& sizes, const std::vector<int>& t);
    bool next(SubBox& out); // false when exhausted
    bool valid() const { return valid_; }

private:
    std::vector<int> sizes_, t_;
    SubBox cur_;
    bool valid_ = false;
    bool fresh_ = true;
};

// First box (in enumeration order) that is J-canonical for any J; the witness
// carries the least such J in ascending mask order. Budget ticks once per box.
std::optional<CanonicalWitness> find_canonical_copy_exhaustive(const Colouring& col,
                                                               const std::vector<int>& t,
                                                               Budget& budget);

} // namespace phc

#pragma once

#include "phc/core.hpp"

#include <iosfwd>
#include <string>

namespace phc {

// Text formats are line-oriented; blank lines and lines starting with '#'
// are ignored. All parsers throw ParseError with a 1-based line number.

Colouring parse_colouring(std::istream& in);
void serialize_colouring(const Colouring& col, std::ostream& out);

PartiteHypergraph parse_hypergraph(std::istream& in);
void serialize_hypergraph(const PartiteHypergraph& h, std::ostream& out);

SubBox parse_box(std::istream& in);
void serialize_box(const SubBox& box, std::ostream& out);

CanonicalWitness parse_witness(std::istream& in);
void serialize_witness(const CanonicalWitness& w, std::ostream& out);

Colouring load_colouring(const std::string& path);
PartiteHypergraph load_hypergraph(const std::string& path);
SubBox load_box(const std::string& path);
CanonicalWitness load_witness(const std::string& path);

// box sits inside the grid: right arity, sorted distinct in-range vertices
void validate_box(const Grid& grid, const SubBox& box);

} // namespace phc

#include "doctest.h"

#include "helpers.hpp"
#include "phc/errors.hpp"
#include "phc/io.hpp"

#include <sstream>

using namespace phc;
using namespace phc::testing;

namespace {

Colouring reparse(const Colouring& col) {
    std::stringstream s;
    serialize_colouring(col, s);
    return parse_colouring(s);
}

} // namespace

TEST_CASE("colouring round-trip, comments and CRLF tolerated") {
    std::stringstream in(
        "# a comment\r\n"
        "phc 1 colouring\n"
        "\n"
        "2 2 3\r\n"
        "0 0 4\n0 1 0\n0 2 0\n1 0 1\n1 1 1\n1 2 2\n");
    Colouring col = parse_colouring(in);
    CHECK(col.grid.sizes == std::vector<int>{2, 3});
    CHECK(col.palette == 5);
    CHECK(col.at({0, 0}) == 4);

    Colouring again = reparse(col);
    CHECK(again.grid == col.grid);
    CHECK(again.colour == col.colour);
    CHECK(again.palette == col.palette);
}

TEST_CASE("colouring parse errors carry line numbers") {
    auto expect_line = [](const std::string& text, int line) {
        std::stringstream in(text);
        try {
            parse_colouring(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };
    expect_line("phc 1 box\n2 2 2\n", 1);                       // wrong kind
    expect_line("phc 1 colouring\n2 2\n", 2);                   // short dims
    expect_line("phc 1 colouring\n2 2 2\n0 0 0\n0 0 1\n", 4);   // duplicate edge
    expect_line("phc 1 colouring\n2 2 2\n0 0 0\n", 3);          // missing edges (reported at EOF)
    expect_line("phc 1 colouring\n2 2 2\n0 0 -1\n", 3);         // negative colour
    expect_line("phc 1 colouring\n2 2 2\n0 5 0\n", 3);          // vertex out of range
}

TEST_CASE("hypergraph round-trip and errors") {
    std::stringstream in("phc 1 hypergraph\n2 2 2\n0 0\n1 1\n");
    PartiteHypergraph h = parse_hypergraph(in);
    CHECK(h.edge_count == 2);
    CHECK(h.has({0, 0}));
    CHECK(!h.has({0, 1}));

    std::stringstream out;
    serialize_hypergraph(h, out);
    PartiteHypergraph again = parse_hypergraph(out);
    CHECK(again.present == h.present);

    std::stringstream dup("phc 1 hypergraph\n2 2 2\n0 0\n0 0\n");
    CHECK_THROWS_AS(parse_hypergraph(dup), ParseError);
}

TEST_CASE("box round-trip, ordering enforced") {
    std::stringstream in("phc 1 box\n2\n0 2\n1 3\n");
    SubBox box = parse_box(in);
    CHECK(box.cls == std::vector<std::vector<int>>{{0, 2}, {1, 3}});

    std::stringstream out;
    serialize_box(box, out);
    CHECK(parse_box(out) == box);

    std::stringstream bad("phc 1 box\n2\n2 0\n1 3\n");
    CHECK_THROWS_AS(parse_box(bad), ParseError);

    validate_box(Grid({3, 4}), box);
    CHECK_THROWS(validate_box(Grid({2, 4}), box)); // vertex 2 not in class 1
}

TEST_CASE("witness round-trip") {
    Colouring col = from_rgs({0, 0, 1, 1}, {2, 2});
    SubBox box = full_box(col.grid);
    auto w = check_j_canonical(col, box, 1);
    REQUIRE(w.has_value());

    std::stringstream s;
    serialize_witness(*w, s);
    CanonicalWitness again = parse_witness(s);
    CHECK(again.j_set == w->j_set);
    CHECK(again.box == w->box);
    CHECK(again.fibers == w->fibers);
    CHECK(verify_witness(col, again));
}

TEST_CASE("fuzzed colourings survive serialize/parse") {
    Rng rng(2024);
    for (int it = 0; it < 80; ++it) {
        int k = 1 + static_cast<int>(rng.below(3));
        std::vector<int> sizes;
        for (int c = 0; c < k; ++c) sizes.push_back(1 + static_cast<int>(rng.below(4)));
        Colouring col = random_colouring(rng, sizes, 1 + static_cast<int>(rng.below(6)));
        Colouring again = reparse(col);
        CHECK(again.grid == col.grid);
        CHECK(again.colour == col.colour);
    }
}

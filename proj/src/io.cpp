#include "phc/io.hpp"

#include "phc/errors.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace phc {

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // next content line split into tokens; false at EOF
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t i = line.find_first_not_of(" \t");
            if (i == std::string::npos || line[i] == '#') continue;
            tokens.clear();
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_no); }
};

long long to_int(LineReader& r, const std::string& tok, long long lo, long long hi) {
    long long v;
    try {
        std::size_t used = 0;
        v = std::stoll(tok, &used);
        if (used != tok.size()) r.fail("not an integer: " + tok);
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        r.fail("not an integer: " + tok);
    }
    if (v < lo || v > hi) r.fail("value out of range: " + tok);
    return v;
}

void expect_header(LineReader& r, const char* kind) {
    std::vector<std::string> t;
    if (!r.next(t)) r.fail("empty input");
    if (t.size() != 3 || t[0] != "phc" || t[1] != "1" || t[2] != kind)
        r.fail(std::string("expected header 'phc 1 ") + kind + "'");
}

Grid parse_dims(LineReader& r) {
    std::vector<std::string> t;
    if (!r.next(t)) r.fail("missing dimensions line");
    if (t.empty()) r.fail("missing dimensions line");
    int k = static_cast<int>(to_int(r, t[0], 1, 32));
    if (static_cast<int>(t.size()) != k + 1) r.fail("dimensions line needs k sizes");
    std::vector<int> sizes(k);
    for (int c = 0; c < k; ++c) sizes[c] = static_cast<int>(to_int(r, t[c + 1], 1, 1 << 20));
    try {
        return Grid(sizes);
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
}

} // namespace

Colouring parse_colouring(std::istream& in) {
    LineReader r{in};
    expect_header(r, "colouring");
    Colouring col;
    col.grid = parse_dims(r);
    col.colour.assign(col.grid.cells, -1);
    std::uint64_t seen = 0;
    std::vector<std::string> t;
    std::vector<int> coords(col.grid.k);
    while (r.next(t)) {
        if (static_cast<int>(t.size()) != col.grid.k + 1)
            r.fail("edge line needs k indices and a colour");
        for (int c = 0; c < col.grid.k; ++c)
            coords[c] = static_cast<int>(to_int(r, t[c], 0, col.grid.sizes[c] - 1));
        int colour = static_cast<int>(to_int(r, t[col.grid.k], 0, (1 << 30)));
        std::uint64_t f = col.grid.flat(coords);
        if (col.colour[f] != -1) r.fail("duplicate edge");
        col.colour[f] = colour;
        ++seen;
        if (colour >= col.palette) col.palette = colour + 1;
    }
    if (seen != col.grid.cells) r.fail("missing edges: expected every edge exactly once");
    return col;
}

void serialize_colouring(const Colouring& col, std::ostream& out) {
    out << "phc 1 colouring\n" << col.grid.k;
    for (int s : col.grid.sizes) out << ' ' << s;
    out << '\n';
    std::vector<int> coords;
    for (std::uint64_t f = 0; f < col.grid.cells; ++f) {
        col.grid.coords_of(f, coords);
        for (int c : coords) out << c << ' ';
        out << col.colour[f] << '\n';
    }
}

PartiteHypergraph parse_hypergraph(std::istream& in) {
    LineReader r{in};
    expect_header(r, "hypergraph");
    PartiteHypergraph h;
    h.grid = parse_dims(r);
    h.present.assign(h.grid.cells, 0);
    std::vector<std::string> t;
    std::vector<int> coords(h.grid.k);
    while (r.next(t)) {
        if (static_cast<int>(t.size()) != h.grid.k) r.fail("edge line needs k indices");
        for (int c = 0; c < h.grid.k; ++c)
            coords[c] = static_cast<int>(to_int(r, t[c], 0, h.grid.sizes[c] - 1));
        std::uint64_t f = h.grid.flat(coords);
        if (h.present[f]) r.fail("duplicate edge");
        h.present[f] = 1;
        ++h.edge_count;
    }
    return h;
}

void serialize_hypergraph(const PartiteHypergraph& h, std::ostream& out) {
    out << "phc 1 hypergraph\n" << h.grid.k;
    for (int s : h.grid.sizes) out << ' ' << s;
    out << '\n';
    std::vector<int> coords;
    for (std::uint64_t f = 0; f < h.grid.cells; ++f) {
        if (!h.present[f]) continue;
        h.grid.coords_of(f, coords);
        for (int c = 0; c < h.grid.k; ++c) out << coords[c] << (c + 1 == h.grid.k ? '\n' : ' ');
    }
}

SubBox parse_box(std::istream& in) {
    LineReader r{in};
    expect_header(r, "box");
    std::vector<std::string> t;
    if (!r.next(t) || t.size() != 1) r.fail("expected class count");
    int k = static_cast<int>(to_int(r, t[0], 1, 32));
    SubBox box;
    box.cls.resize(k);
    for (int c = 0; c < k; ++c) {
        if (!r.next(t) || t.empty()) r.fail("missing class line");
        for (const auto& tok : t)
            box.cls[c].push_back(static_cast<int>(to_int(r, tok, 0, (1 << 30))));
        for (std::size_t i = 1; i < box.cls[c].size(); ++i)
            if (box.cls[c][i] <= box.cls[c][i - 1]) r.fail("class vertices must be strictly increasing");
    }
    return box;
}

void serialize_box(const SubBox& box, std::ostream& out) {
    out << "phc 1 box\n" << box.k() << '\n';
    for (const auto& u : box.cls) {
        for (std::size_t i = 0; i < u.size(); ++i) out << u[i] << (i + 1 == u.size() ? '\n' : ' ');
    }
}

CanonicalWitness parse_witness(std::istream& in) {
    LineReader r{in};
    expect_header(r, "witness");
    std::vector<std::string> t;
    if (!r.next(t) || t.size() != 1) r.fail("expected class count");
    int k = static_cast<int>(to_int(r, t[0], 1, 32));
    CanonicalWitness w;
    if (!r.next(t) || t.empty() || t[0] != "J") r.fail("expected J line");
    for (std::size_t i = 1; i < t.size(); ++i) {
        int c = static_cast<int>(to_int(r, t[i], 1, k));
        w.j_set |= 1u << (c - 1);
    }
    w.box.cls.resize(k);
    for (int c = 0; c < k; ++c) {
        if (!r.next(t) || t.size() < 2 || t[0] != "cls") r.fail("expected cls line");
        for (std::size_t i = 1; i < t.size(); ++i)
            w.box.cls[c].push_back(static_cast<int>(to_int(r, t[i], 0, (1 << 30))));
        for (std::size_t i = 1; i < w.box.cls[c].size(); ++i)
            if (w.box.cls[c][i] <= w.box.cls[c][i - 1])
                r.fail("class vertices must be strictly increasing");
    }
    int jsize = jset_size(w.j_set);
    while (r.next(t)) {
        if (t.empty() || t[0] != "fiber") r.fail("expected fiber line");
        if (static_cast<int>(t.size()) != jsize + 3 || t[jsize + 1] != ":")
            r.fail("malformed fiber line");
        std::vector<int> key(jsize);
        for (int i = 0; i < jsize; ++i)
            key[i] = static_cast<int>(to_int(r, t[i + 1], 0, (1 << 30)));
        int colour = static_cast<int>(to_int(r, t[jsize + 2], 0, (1 << 30)));
        w.fibers.emplace_back(std::move(key), colour);
    }
    if (w.fibers.empty()) r.fail("witness needs at least one fiber");
    for (std::size_t i = 1; i < w.fibers.size(); ++i)
        if (!(w.fibers[i - 1].first < w.fibers[i].first)) r.fail("fibers must be sorted by key");
    return w;
}

void serialize_witness(const CanonicalWitness& w, std::ostream& out) {
    int k = w.box.k();
    out << "phc 1 witness\n" << k << '\n';
    out << "J";
    for (int c : jset_members(w.j_set, k)) out << ' ' << c;
    out << '\n';
    for (const auto& u : w.box.cls) {
        out << "cls";
        for (int v : u) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [key, colour] : w.fibers) {
        out << "fiber";
        for (int v : key) out << ' ' << v;
        out << " : " << colour << '\n';
    }
}

namespace {

template <typename T>
T load_file(const std::string& path, T (*parse)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in);
}

} // namespace

Colouring load_colouring(const std::string& path) { return load_file(path, parse_colouring); }
PartiteHypergraph load_hypergraph(const std::string& path) {
    return load_file(path, parse_hypergraph);
}
SubBox load_box(const std::string& path) { return load_file(path, parse_box); }
CanonicalWitness load_witness(const std::string& path) { return load_file(path, parse_witness); }

void validate_box(const Grid& grid, const SubBox& box) {
    if (box.k() != grid.k) throw std::invalid_argument("box arity does not match grid");
    for (int c = 0; c < grid.k; ++c) {
        if (box.cls[c].empty()) throw std::invalid_argument("empty box class");
        if (box.cls[c].back() >= grid.sizes[c])
            throw std::invalid_argument("box vertex out of range");
    }
}

} // namespace phc

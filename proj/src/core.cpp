#include "phc/core.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace phc {

Grid::Grid(std::vector<int> sz) : k(static_cast<int>(sz.size())), sizes(std::move(sz)) {
    if (k < 1) throw std::invalid_argument("grid needs at least one class");
    stride.assign(k, 1);
    cells = 1;
    for (int c = k - 1; c >= 0; --c) {
        if (sizes[c] < 1) throw std::invalid_argument("class sizes must be positive");
        stride[c] = cells;
        cells *= static_cast<std::uint64_t>(sizes[c]);
        if (cells > (1ULL << 40)) throw std::invalid_argument("grid too large");
    }
}

std::uint64_t Grid::flat(const std::vector<int>& coords) const {
    std::uint64_t f = 0;
    for (int c = 0; c < k; ++c) f += stride[c] * static_cast<std::uint64_t>(coords[c]);
    return f;
}

void Grid::coords_of(std::uint64_t flat, std::vector<int>& out) const {
    out.resize(k);
    for (int c = 0; c < k; ++c) {
        out[c] = static_cast<int>(flat / stride[c]);
        flat %= stride[c];
    }
}

std::vector<int> Grid::coords_of(std::uint64_t flat) const {
    std::vector<int> out;
    coords_of(flat, out);
    return out;
}

std::uint64_t SubBox::edge_total() const {
    std::uint64_t e = 1;
    for (const auto& u : cls) e *= u.size();
    return e;
}

std::vector<int> jset_members(JSet j, int k) {
    std::vector<int> out;
    for (int c = 1; c <= k; ++c)
        if (j & (1u << (c - 1))) out.push_back(c);
    return out;
}

std::string jset_name(JSet j, int k) {
    std::string s = "{";
    bool first = true;
    for (int c : jset_members(j, k)) {
        if (!first) s += ",";
        s += std::to_string(c);
        first = false;
    }
    return s + "}";
}

std::optional<JSet> parse_jset(const std::string& s, int k) {
    std::string body = s;
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}')
        body = body.substr(1, body.size() - 2);
    JSet j = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (tok.empty()) return std::nullopt;
        int c;
        try {
            c = std::stoi(tok);
        } catch (...) {
            return std::nullopt;
        }
        if (c < 1 || c > k) return std::nullopt;
        j |= 1u << (c - 1);
        pos = comma == std::string::npos ? body.size() : comma + 1;
    }
    return j;
}

std::vector<JSet> all_jsets(int k) {
    std::vector<JSet> out;
    for (JSet j = 0; j < (1u << k); ++j) out.push_back(j);
    return out;
}

std::vector<JSet> jsets_of_size(int k, int size) {
    std::vector<JSet> out;
    std::vector<int> sel(size);
    for (int i = 0; i < size; ++i) sel[i] = i;
    if (size == 0) return {0u};
    while (true) {
        JSet j = 0;
        for (int v : sel) j |= 1u << v;
        out.push_back(j);
        int i = size - 1;
        while (i >= 0 && sel[i] == k - size + i) --i;
        if (i < 0) break;
        ++sel[i];
        for (int l = i + 1; l < size; ++l) sel[l] = sel[l - 1] + 1;
    }
    return out;
}

std::vector<int> restrict_edge(const std::vector<int>& coords, JSet j) {
    std::vector<int> out;
    for (std::size_t c = 0; c < coords.size(); ++c)
        if (j & (1u << c)) out.push_back(coords[c]);
    return out;
}

JProjector::JProjector(const Grid& grid, JSet j_set) {
    for (int c = 0; c < grid.k; ++c)
        if (j_set & (1u << c)) members.push_back(c);
    mul.assign(members.size(), 1);
    std::uint64_t m = 1;
    for (int i = static_cast<int>(members.size()) - 1; i >= 0; --i) {
        mul[i] = m;
        m *= static_cast<std::uint64_t>(grid.sizes[members[i]]);
    }
    total_ = m;
}

std::uint64_t JProjector::index(const std::vector<int>& coords) const {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        f += mul[i] * static_cast<std::uint64_t>(coords[members[i]]);
    return f;
}

std::uint64_t JProjector::total() const { return total_; }

namespace {

// walks all edges of the box, row-major in the local coordinates
template <typename F>
void for_each_box_edge(const SubBox& box, F&& fn) {
    int k = box.k();
    std::vector<int> local(k, 0), coords(k);
    for (int c = 0; c < k; ++c) coords[c] = box.cls[c][0];
    for (;;) {
        fn(coords);
        int c = k - 1;
        while (c >= 0) {
            if (++local[c] < static_cast<int>(box.cls[c].size())) {
                coords[c] = box.cls[c][local[c]];
                break;
            }
            local[c] = 0;
            coords[c] = box.cls[c][0];
            --c;
        }
        if (c < 0) return;
    }
}

} // namespace

std::optional<CanonicalWitness> check_j_canonical(const Colouring& col, const SubBox& box,
                                                  JSet j_set) {
    std::map<std::vector<int>, int> fiber_to_colour;
    std::map<int, const std::vector<int>*> colour_to_fiber;
    bool ok = true;
    for_each_box_edge(box, [&](const std::vector<int>& coords) {
        if (!ok) return;
        int c = col.at(coords);
        auto key = restrict_edge(coords, j_set);
        auto [it, fresh] = fiber_to_colour.try_emplace(std::move(key), c);
        if (!fresh) {
            if (it->second != c) ok = false;
            return;
        }
        auto [it2, fresh2] = colour_to_fiber.try_emplace(c, &it->first);
        if (!fresh2 && *it2->second != it->first) ok = false;
    });
    if (!ok) return std::nullopt;
    CanonicalWitness w;
    w.j_set = j_set;
    w.box = box;
    w.fibers.assign(fiber_to_colour.begin(), fiber_to_colour.end());
    return w;
}

std::vector<JSet> classify_box(const Colouring& col, const SubBox& box) {
    std::vector<JSet> out;
    for (JSet j = 0; j < (1u << col.grid.k); ++j)
        if (check_j_canonical(col, box, j)) out.push_back(j);
    return out;
}

bool verify_witness(const Colouring& col, const CanonicalWitness& w) {
    if (w.box.k() != col.grid.k) return false;
    for (int c = 0; c < col.grid.k; ++c) {
        if (w.box.cls[c].empty()) return false;
        int prev = -1;
        for (int v : w.box.cls[c]) {
            if (v <= prev || v >= col.grid.sizes[c]) return false;
            prev = v;
        }
    }
    auto got = check_j_canonical(col, w.box, w.j_set);
    return got && got->fibers == w.fibers;
}

BoxEnumerator::BoxEnumerator(const std::vector<int>& sizes, const std::vector<int>& t)
    : sizes_(sizes), t_(t) {
    if (sizes.size() != t.size()) throw std::invalid_argument("t arity mismatch");
    cur_.cls.resize(sizes.size());
    valid_ = true;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (t[c] < 1 || t[c] > sizes[c]) {
            valid_ = false;
            return;
        }
        cur_.cls[c].resize(t[c]);
        for (int i = 0; i < t[c]; ++i) cur_.cls[c][i] = i;
    }
}

bool BoxEnumerator::next(SubBox& out) {
    if (!valid_) return false;
    if (fresh_) {
        fresh_ = false;
        out = cur_;
        return true;
    }
    // advance: last class's combination first
    int c = static_cast<int>(sizes_.size()) - 1;
    while (c >= 0) {
        auto& sel = cur_.cls[c];
        int tc = t_[c];
        int i = tc - 1;
        while (i >= 0 && sel[i] == sizes_[c] - tc + i) --i;
        if (i >= 0) {
            ++sel[i];
            for (int l = i + 1; l < tc; ++l) sel[l] = sel[l - 1] + 1;
            out = cur_;
            return true;
        }
        for (int l = 0; l < tc; ++l) sel[l] = l;
        --c;
    }
    valid_ = false;
    return false;
}

std::optional<CanonicalWitness> find_canonical_copy_exhaustive(const Colouring& col,
                                                               const std::vector<int>& t,
                                                               Budget& budget) {
    BoxEnumerator en(col.grid.sizes, t);
    SubBox box;
    while (en.next(box)) {
        budget.tick("exhaustive canonical search");
        for (JSet j = 0; j < (1u << col.grid.k); ++j)
            if (auto w = check_j_canonical(col, box, j)) return w;
    }
    return std::nullopt;
}

} // namespace phc

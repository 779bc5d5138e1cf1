#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phc {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& where)
        : std::runtime_error("budget exceeded in " + where) {}
};

// Counts elementary steps of a bounded search; limit 0 means unlimited.
struct Budget {
    std::uint64_t limit = 0;
    std::uint64_t used = 0;

    void tick(const char* where, std::uint64_t cost = 1) {
        used += cost;
        if (limit && used > limit) throw BudgetExceeded(where);
    }
    bool exhausted() const { return limit && used >= limit; }
};

} // namespace phc

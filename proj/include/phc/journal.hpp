#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace phc {

// One append-only journal line: space-separated key=value pairs, values
// quoted when they contain whitespace or quotes.
struct JournalRecord {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value);
    void add(const std::string& key, std::uint64_t value);
    void add(const std::string& key, std::int64_t value);
    void add(const std::string& key, int value);
    void add(const std::string& key, double value);

    std::string line() const;
};

// appends rec to path; empty path is a no-op, IO errors are reported
bool append_journal(const std::string& path, const JournalRecord& rec);

} // namespace phc

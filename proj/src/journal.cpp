#include "phc/journal.hpp"

#include <fstream>
#include <sstream>

namespace phc {

namespace {

bool needs_quote(const std::string& v) {
    if (v.empty()) return true;
    for (char c : v)
        if (c == ' ' || c == '\t' || c == '"' || c == '\n') return true;
    return false;
}

std::string quoted(const std::string& v) {
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

} // namespace

void JournalRecord::add(const std::string& key, const std::string& value) {
    fields.push_back({key, value});
}

void JournalRecord::add(const std::string& key, const char* value) {
    fields.push_back({key, std::string(value)});
}

void JournalRecord::add(const std::string& key, std::uint64_t value) {
    fields.push_back({key, std::to_string(value)});
}

void JournalRecord::add(const std::string& key, std::int64_t value) {
    fields.push_back({key, std::to_string(value)});
}

void JournalRecord::add(const std::string& key, int value) {
    fields.push_back({key, std::to_string(value)});
}

void JournalRecord::add(const std::string& key, double value) {
    std::ostringstream os;
    os << value;
    fields.push_back({key, os.str()});
}

std::string JournalRecord::line() const {
    std::string out;
    for (const auto& [key, value] : fields) {
        if (!out.empty()) out += ' ';
        out += key + "=" + (needs_quote(value) ? quoted(value) : value);
    }
    return out;
}

bool append_journal(const std::string& path, const JournalRecord& rec) {
    if (path.empty()) return true;
    std::ofstream f(path, std::ios::app);
    if (!f) return false;
    f << rec.line() << '\n';
    return static_cast<bool>(f);
}

} // namespace phc

#pragma once

#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ids::csv {

inline auto Escape(std::string_view field) -> std::string
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) { return std::string(field); }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') { out += '"'; }
        out += ch;
    }
    out += '"';
    return out;
}

inline auto Join(std::vector<std::string> const& fields) -> std::string
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) { line += ','; }
        line += Escape(fields[i]);
    }
    return line;
}

// RFC 4180 style split of one physical line (quoted newlines are not supported).
inline auto Split(std::string_view line) -> std::vector<std::string>
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char const ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

// Fixed-precision formatting so that logs are byte-stable.
inline auto Fixed(double x, int digits = 4) -> std::string
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

} // namespace ids::csv

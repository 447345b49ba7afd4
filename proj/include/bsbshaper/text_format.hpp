#pragma once

// Small text helpers shared by the material database, config files and CSV
// emitters: lossless double formatting and a `key = value` document reader.

#include <bsbshaper/errors.hpp>

#include <charconv>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace bsb {

/// Shortest decimal representation that parses back to the identical double.
inline std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

/// Twelve significant digits; hides unit-conversion roundoff in headers.
inline std::string format_display(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    if (ec != std::errc{}) throw Error("format_display: conversion failed");
    return std::string(buf, ptr);
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::string_view context) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(std::string(context) + ": not a number: '" + std::string(text) + "'");
    }
    return value;
}

inline long long parse_integer(std::string_view text, std::string_view context) {
    text = trim(text);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(std::string(context) + ": not an integer: '" + std::string(text) + "'");
    }
    return value;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

/// Whitespace-separated fields.
inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        pos = s.find_first_not_of(" \t", pos);
        if (pos == std::string_view::npos) break;
        auto end = s.find_first_of(" \t", pos);
        if (end == std::string_view::npos) end = s.size();
        out.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

/// `[section]` headers, `key = value` lines, `#` comments. Keys may repeat.
struct KeyValueEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct KeyValueSection {
    std::string name;  // empty for entries before the first header
    std::vector<KeyValueEntry> entries;

    std::optional<std::string> get(std::string_view key) const {
        std::optional<std::string> found;
        for (const auto& e : entries)
            if (e.key == key) found = e.value;  // last one wins
        return found;
    }

    std::vector<std::string> get_all(std::string_view key) const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (e.key == key) out.push_back(e.value);
        return out;
    }
};

class KeyValueDocument {
public:
    static KeyValueDocument parse(std::istream& in, std::string_view source = "<input>") {
        KeyValueDocument doc;
        doc.sections_.push_back(KeyValueSection{});
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string_view line = trim(raw);
            if (line.empty() || line.front() == '#') continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unterminated section header");
                }
                doc.sections_.push_back(KeyValueSection{std::string(trim(line.substr(1, line.size() - 2))), {}});
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
            }
            const auto key = trim(line.substr(0, eq));
            if (key.empty()) {
                throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
            }
            doc.sections_.back().entries.push_back(
                KeyValueEntry{std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
        }
        return doc;
    }

    static KeyValueDocument parse(std::string_view text, std::string_view source = "<input>") {
        std::istringstream in{std::string(text)};
        return parse(in, source);
    }

    const KeyValueSection& global() const { return sections_.front(); }

    const std::vector<KeyValueSection>& sections() const { return sections_; }

    const KeyValueSection* find(std::string_view name) const {
        for (const auto& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

private:
    std::vector<KeyValueSection> sections_;
};

}  // namespace bsb

#include "toml_lite.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace hqc::toml_lite {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

bool parse_number(std::string text, double& out) {
    text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
    if (text.empty()) return false;
    const char* first = text.data();
    if (*first == '+') ++first;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

Document parse(const std::string& text, const std::string& source) {
    Document doc;
    std::string table;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated table header");
            table = trim(line.substr(1, line.size() - 2));
            if (!valid_key(table)) fail("invalid table name '" + table + "'");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        if (!valid_key(key)) fail("invalid key '" + key + "'");
        if (rhs.empty()) fail("missing value for '" + key + "'");

        Value value;
        if (rhs.front() == '"') {
            if (rhs.size() < 2 || rhs.back() != '"') fail("unterminated string for '" + key + "'");
            value = rhs.substr(1, rhs.size() - 2);
        } else if (rhs == "true" || rhs == "false") {
            value = (rhs == "true");
        } else if (rhs.front() == '[') {
            if (rhs.back() != ']') fail("unterminated array for '" + key + "'");
            std::vector<double> items;
            std::istringstream parts(rhs.substr(1, rhs.size() - 2));
            std::string item;
            while (std::getline(parts, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                double v = 0.0;
                if (!parse_number(item, v)) fail("array element '" + item + "' of '" + key + "' is not a number");
                items.push_back(v);
            }
            value = std::move(items);
        } else {
            double v = 0.0;
            if (!parse_number(rhs, v)) fail("value '" + rhs + "' of '" + key + "' is not a number");
            value = v;
        }

        const std::string full = table.empty() ? key : table + "." + key;
        if (doc.count(full)) fail("duplicate key '" + full + "'");
        doc.emplace(full, Entry{std::move(value), line_no, rhs});
    }
    return doc;
}

}  // namespace hqc::toml_lite

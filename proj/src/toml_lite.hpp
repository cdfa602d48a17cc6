#pragma once

// Reader for the TOML subset used by run configs: [table] headers, key = value with
// strings, numbers, booleans and flat arrays of numbers, '#' comments.

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hqc::toml_lite {

using Value = std::variant<std::string, double, bool, std::vector<double>>;

struct Entry {
    Value value;
    int line = 0;
    /// Value text as written (used for integers wider than a double mantissa).
    std::string raw;
};

/// Keys are "table.key" (or "key" at top level).
using Document = std::map<std::string, Entry>;

/// Throws std::runtime_error("<source>:<line>: ...") on malformed input or duplicate keys.
Document parse(const std::string& text, const std::string& source);

}  // namespace hqc::toml_lite

#pragma once

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ri1d/driver.hpp"
#include "ri1d/energy_model.hpp"

namespace ri1d {

// Flat key=value text. '#' starts a comment; blank lines are ignored.
class KeyValues {
public:
    static KeyValues parse(std::istream& in);
    /// Whitespace-separated tokens, e.g. "cantor level=5" (a bare first token is the type).
    static KeyValues parse_inline(const std::string& text);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    int line(const std::string& key) const;
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    /// "a:b,c:d" lists.
    std::vector<std::pair<double, double>> pairs(const std::string& key) const;
    /// Throws ConfigError naming the first key not in allowed.
    void require_only(const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::pair<std::string, int>> entries_;
};

std::string format_number(double v);

EnergyModel parse_model(const KeyValues& kv);
EnergyModel load_model(const std::string& path);
std::string serialize_model(const EnergyModel& model);

MonotoneDriver parse_driver(const KeyValues& kv);
MonotoneDriver load_driver(const std::string& path);

} // namespace ri1d

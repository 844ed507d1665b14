#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elmap/error.hpp"

namespace elmap {

// Ordered flat `key = value` settings. Lines starting with '#' and blank lines are ignored;
// later assignments to the same key replace earlier ones in place.
class ExperimentConfig {
  public:
    static ExperimentConfig parse(std::istream& is) {
        ExperimentConfig c;
        std::string line;
        std::size_t no = 0;
        while (std::getline(is, line)) {
            ++no;
            const auto t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(ErrorKind::parse, "config line " + std::to_string(no) + ": expected 'key = value'");
            const auto key = trim(t.substr(0, eq));
            if (key.empty()) fail(ErrorKind::parse, "config line " + std::to_string(no) + ": empty key");
            c.set(key, trim(t.substr(eq + 1)));
        }
        return c;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) fail(ErrorKind::io, "cannot open config " + path);
        return parse(in);
    }

    void write(std::ostream& os) const {
        for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
    }

    void set(const std::string& key, const std::string& value) {
        for (auto& kv : entries_) {
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        }
        entries_.emplace_back(key, value);
    }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : entries_) {
            if (k == key) return v;
        }
        return std::nullopt;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const { return get(key).value_or(fallback); }

    std::optional<std::int64_t> get_int(const std::string& key) const {
        const auto v = get(key);
        if (!v) return std::nullopt;
        try {
            std::size_t used = 0;
            const auto x = std::stoll(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            fail(ErrorKind::argument, "config key '" + key + "' is not an integer: " + *v);
        }
    }

    std::optional<std::uint64_t> get_u64(const std::string& key) const {
        const auto v = get(key);
        if (!v) return std::nullopt;
        try {
            std::size_t used = 0;
            const auto x = std::stoull(*v, &used);
            if (used != v->size() || (!v->empty() && (*v)[0] == '-')) throw std::invalid_argument("bad");
            return x;
        } catch (const std::exception&) {
            fail(ErrorKind::argument, "config key '" + key + "' is not an unsigned integer: " + *v);
        }
    }

    std::optional<double> get_double(const std::string& key) const {
        const auto v = get(key);
        if (!v) return std::nullopt;
        try {
            std::size_t used = 0;
            const auto x = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            fail(ErrorKind::argument, "config key '" + key + "' is not a number: " + *v);
        }
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace elmap

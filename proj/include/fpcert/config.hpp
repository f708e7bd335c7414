#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpcert {

struct ConfigError : std::runtime_error {
  std::size_t line;  // 1-based; 0 when no line applies

  explicit ConfigError(const std::string& message, std::size_t line_no = 0)
      : std::runtime_error(message), line(line_no) {}
};

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

// Flat `key = value` text grouped under `[section]` headers. '#' starts a
// comment line. Later assignments to the same section/key win, so a config
// can be extended by appending.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string line = detail::trim(raw);
      if (line.empty() || line[0] == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ConfigError("line " + std::to_string(line_no) +
                                ": malformed section header '" + line + "'",
                            line_no);
        }
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'",
                          line_no);
      }
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(
            "line " + std::to_string(line_no) + ": empty key before '='",
            line_no);
      }
      for (char c : key) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '-' && c != '.') {
          throw ConfigError("line " + std::to_string(line_no) +
                                ": key '" + key +
                                "' contains an invalid character",
                            line_no);
        }
      }
      cfg.entries_.push_back(ConfigEntry{section, key, value, line_no});
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  const std::vector<ConfigEntry>& entries() const { return entries_; }

  // Last assignment wins.
  const ConfigEntry* find(const std::string& section,
                          const std::string& key) const {
    const ConfigEntry* hit = nullptr;
    for (const auto& e : entries_) {
      if (e.section == section && e.key == key) hit = &e;
    }
    return hit;
  }

  bool has_section(const std::string& section) const {
    for (const auto& e : entries_) {
      if (e.section == section) return true;
    }
    return false;
  }

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }

  std::string require(const std::string& section, const std::string& key) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
      throw ConfigError("missing key '" + key + "' in section [" + section +
                        "]");
    }
    return e->value;
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    const ConfigEntry* e = find(section, key);
    return e == nullptr ? fallback : parse_double(*e);
  }

  double require_double(const std::string& section,
                        const std::string& key) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) {
      throw ConfigError("missing key '" + key + "' in section [" + section +
                        "]");
    }
    return parse_double(*e);
  }

  std::uint64_t get_uint(const std::string& section, const std::string& key,
                         std::uint64_t fallback) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) return fallback;
    try {
      std::size_t used = 0;
      if (!e->value.empty() && e->value[0] == '-') throw std::exception();
      const std::uint64_t v = std::stoull(e->value, &used);
      if (used != e->value.size()) throw std::exception();
      return v;
    } catch (...) {
      throw ConfigError(describe(*e) + ": expected a non-negative integer, "
                        "got '" + e->value + "'", e->line);
    }
  }

  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") {
      return false;
    }
    throw ConfigError(describe(*e) + ": expected true/false, got '" +
                      e->value + "'", e->line);
  }

  // Comma-separated doubles.
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key,
                                      std::vector<double> fallback) const {
    const ConfigEntry* e = find(section, key);
    if (e == nullptr) return fallback;
    return parse_double_list(*e, e->value);
  }

  std::vector<double> parse_double_list(const ConfigEntry& origin,
                                        const std::string& text) const {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t comma = text.find(',', start);
      const std::string item = detail::trim(
          text.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start));
      if (item.empty()) {
        throw ConfigError(describe(origin) + ": empty list item", origin.line);
      }
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::exception();
      } catch (...) {
        throw ConfigError(describe(origin) + ": expected a number, got '" +
                          item + "'", origin.line);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

 private:
  static std::string describe(const ConfigEntry& e) {
    return "key '" + e.key + "' in section [" + e.section + "] at line " +
           std::to_string(e.line);
  }

  double parse_double(const ConfigEntry& e) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(e.value, &used);
      if (used != e.value.size()) throw std::exception();
      return v;
    } catch (...) {
      throw ConfigError(describe(e) + ": expected a number, got '" + e.value +
                        "'", e.line);
    }
  }

  std::vector<ConfigEntry> entries_;
};

}  // namespace fpcert

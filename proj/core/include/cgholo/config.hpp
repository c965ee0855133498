#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cgholo {

/// One [section] of a config file; key/value pairs in file order.
struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key) const;
};

/// Line-oriented config: [section] headers, key = value pairs, # comments.
/// Sections may repeat (several [job] sections run several jobs).
struct Config {
  std::vector<ConfigSection> sections;

  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  /// First section with the given name, if any.
  const ConfigSection* find(const std::string& name) const;
  std::vector<const ConfigSection*> find_all(const std::string& name) const;
};

}  // namespace cgholo

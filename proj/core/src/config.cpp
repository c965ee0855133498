#include "cgholo/config.hpp"

#include <fstream>
#include <sstream>

#include "cgholo/error.hpp"

namespace cgholo {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

bool ConfigSection::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> ConfigSection::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string ConfigSection::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ConfigError("section [" + name + "] is missing key '" + key + "'");
  return *v;
}

double ConfigSection::require_double(const std::string& key) const {
  const std::string v = require(key);
  try {
    std::size_t pos;
    double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "' in [" + name + "] is not a number: '" + v + "'");
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  return has(key) ? require_double(key) : fallback;
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  double d = require_double(key);
  int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("key '" + key + "' in [" + name + "] is not an integer");
  return i;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("key '" + key + "' in [" + name + "] is not a boolean: '" + *v + "'");
}

std::vector<double> ConfigSection::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(require(key));
  double d;
  while (in >> d) out.push_back(d);
  if (!in.eof())
    throw ConfigError("key '" + key + "' in [" + name + "] is not a number list");
  return out;
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      cfg.sections.push_back(ConfigSection{trim(line.substr(1, line.size() - 2)), {}});
      current = &cfg.sections.back();
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    if (!current)
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    current->entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ConfigSection* Config::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const ConfigSection*> Config::find_all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

}  // namespace cgholo

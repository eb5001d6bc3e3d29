#include "nlkpp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("key '" + key + "': empty numeric value");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ConfigError("key '" + key + "': cannot parse '" + t + "' as number");
  return v;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    cfg.map_[key] = value;
  }
  return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_string(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  map_[trim(key)] = trim(value);
}

bool ConfigMap::has(const std::string& key) const { return map_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key) const {
  const auto it = map_.find(key);
  if (it == map_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

long ConfigMap::get_long(const std::string& key) const {
  const std::string t = get_string(key);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("key '" + key + "': cannot parse '" + t + "' as integer");
  return v;
}

bool ConfigMap::get_bool(const std::string& key) const {
  const std::string t = get_string(key);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("key '" + key + "': cannot parse '" + t + "' as boolean");
}

std::vector<double> ConfigMap::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<std::string> ConfigMap::get_strings(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::string ConfigMap::get_string(const std::string& key,
                                  std::string fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ConfigMap::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<std::string> ConfigMap::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : map_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

}  // namespace nlkpp

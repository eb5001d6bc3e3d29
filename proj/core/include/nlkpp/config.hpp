#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlkpp {

// Flat `key = value` config file: one assignment per line, `#` comments,
// dotted keys (kernel.chi = 0.5), space-separated numeric lists. Later
// assignments win, which is also how --override is applied.
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_string(const std::string& text);

  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  // Getters throw ConfigError on missing key or malformed value.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Keys with the given prefix ("kernel." -> kernel.family, ...), sorted.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
  const std::map<std::string, std::string>& entries() const { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

}  // namespace nlkpp

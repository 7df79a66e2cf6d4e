#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "nlsthresh/errors.hpp"

namespace nls {

/// Plain-text `key = value` settings; '#' starts a comment.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig c;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(eq != std::string::npos, ErrorKind::InvalidInput,
              "config line " + std::to_string(line_no) + " is not key = value");
      const std::string key = trim(line.substr(0, eq));
      require(!key.empty(), ErrorKind::InvalidInput, "empty key on config line " + std::to_string(line_no));
      c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
  }

  static KeyValueConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::InvalidInput, "cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), {});
    return parse(text);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    char* end = nullptr;
    const double x = std::strtod(v->c_str(), &end);
    require(end != v->c_str() && *end == '\0', ErrorKind::InvalidInput, "config key " + key + " is not a number");
    return x;
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    char* end = nullptr;
    const long long x = std::strtoll(v->c_str(), &end, 10);
    require(end != v->c_str() && *end == '\0', ErrorKind::InvalidInput, "config key " + key + " is not an integer");
    return x;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    fail(ErrorKind::InvalidInput, "config key " + key + " is not a boolean");
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace nls

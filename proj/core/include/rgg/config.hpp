#pragma once

#include <map>
#include <string>
#include <vector>

namespace rgg {

// Flat key = value document; '#' starts a comment, keys are single level.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config from_file(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<std::string> get_names(const std::string& key,
                                     const std::vector<std::string>& fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set_double(const std::string& key, double value);
  void set_list(const std::string& key, const std::vector<double>& values);

  // sorted keys, one per line — deterministic
  std::string serialize() const;

  const std::map<std::string, std::string>& items() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace rgg

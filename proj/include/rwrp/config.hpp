#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rwrp {

// Flat sectioned key=value configuration. A `[section]` header prefixes the
// keys below it as "section.key"; keys before any header keep their bare
// name. Later assignments win. The canonical serialization (sorted lines)
// feeds the run hash carried in every output row.
class Config {
 public:
  Config() = default;

  static Config parse_text(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // comma-separated lists; empty string parses to an empty list
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // keys under "name." with the prefix stripped
  std::map<std::string, std::string> section(const std::string& name) const;

  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a 64 over canonical()
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rwrp

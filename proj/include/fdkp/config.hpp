#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace fdkp {

/// Experiment configuration in a TOML subset:
///
///   file    := { line }
///   line    := ws ( section | pair | "" ) ws [ "#" comment ] newline
///   section := "[" name "]"
///   pair    := key ws "=" ws value
///   value   := number | string | bool | "[" [ value { "," value } ] "]"
///   string  := '"' chars '"'
///
/// Keys are addressed as "section.key". Arrays hold scalars of one type.
class Config {
 public:
  using Scalar = std::variant<double, std::string, bool>;
  using Value = std::variant<double, std::string, bool, std::vector<Scalar>>;

  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Missing key gives `fallback`; a scalar number is a one-element list.
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;

  void set(const std::string& key, Value value);

  const std::string& source() const { return source_; }
  const std::map<std::string, Value>& entries() const { return entries_; }

 private:
  std::map<std::string, Value> entries_;
  std::string source_;
};

/// 64-bit FNV-1a, used to fingerprint configurations in manifests.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace fdkp

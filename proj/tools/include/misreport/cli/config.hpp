#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace misreport::cli {

/// One `[section]` of a run configuration. Every accessor marks its key as
/// used; reject_unknown() then reports keys nothing asked for.
class ConfigSection {
 public:
  ConfigSection() = default;
  ConfigSection(std::string name, std::map<std::string, std::string> values);

  const std::string& name() const { return name_; }
  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key, double fallback) const;
  std::optional<double> optional_real(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<std::string> list(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  /// Keys starting with `prefix`, with the prefix removed.
  std::map<std::string, std::string> with_prefix(const std::string& prefix) const;
  void reject_unknown() const;

 private:
  std::string qualified(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  std::string name_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

struct RunConfig {
  std::filesystem::path path;
  std::string contents;  // verbatim file text, copied next to the outputs
  std::map<std::string, ConfigSection> sections;

  /// The named section; throws ValidationError when absent.
  ConfigSection& section(const std::string& name);
  /// Resolves a path from the file relative to the config file's directory.
  std::filesystem::path resolve(const std::string& relative) const;
};

/// Reads an INI file with one section per subcommand.
RunConfig load_config(const std::filesystem::path& path);

/// Splits on commas and trims blanks; empty items are dropped.
std::vector<std::string> split_list(const std::string& text);
double parse_real(const std::string& text, const std::string& field);
long long parse_integer(const std::string& text, const std::string& field);

}  // namespace misreport::cli

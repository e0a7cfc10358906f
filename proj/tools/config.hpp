#pragma once

// INI run configuration with per-subcommand schemas, command-line overrides and
// line-numbered diagnostics.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace relmech::cli {

/// Allowed keys per section.
using Schema = std::map<std::string, std::set<std::string>>;

struct ConfigValue {
  std::string value;
  int line = 0;  // 0 when set from the command line
};

class RunConfig {
 public:
  RunConfig() = default;

  /// Throws Error{Config} with the line of a syntax error.
  static RunConfig load(const std::string& path);
  static RunConfig parse(const std::string& text, const std::string& origin = "<config>");

  /// Applies "section.key=value".
  void set(const std::string& assignment);

  /// Rejects sections and keys outside the schema.
  void check(const Schema& schema) const;

  bool has(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key,
                   const std::optional<std::string>& fallback = std::nullopt) const;
  double number(const std::string& section, const std::string& key, const std::optional<double>& fallback = std::nullopt) const;
  long integer(const std::string& section, const std::string& key, const std::optional<long>& fallback = std::nullopt) const;
  /// Comma- or whitespace-separated numbers.
  std::vector<double> numbers(const std::string& section, const std::string& key) const;

  /// "origin:line [section] key" for messages.
  std::string where(const std::string& section, const std::string& key) const;

  nlohmann::json echo() const;

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void bad(const std::string& section, const std::string& key, const std::string& what) const;

  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
  std::string origin_ = "<command line>";
};

}  // namespace relmech::cli

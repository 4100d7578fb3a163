#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace varprin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Command-line flags.
struct CliOptions {
  std::optional<std::string> config_path;
  /// Config contents given directly (used instead of config_path).
  std::optional<std::string> config_text;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
  bool serial = false;
  bool list_builtins = false;
};

/// Flat INI config: section -> key -> value.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  /// Output path prefix; empty writes the report to stdout.
  std::string output;
  std::string format = "json";
  std::map<std::string, std::map<std::string, std::string>> sections;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key, int fallback) const;
  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;

  /// FNV-1a digest of the canonical key=value listing (seed and format included).
  std::string digest() const;
};

/// Parses and validates INI text. Throws UsageError with the location on
/// malformed input, unknown sections or keys, and bad values.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Applies flag overrides to a parsed config.
void apply_overrides(RunConfig& config, const CliOptions& options);

/// Runs the configured command: writes the report (and plot or solution
/// data) and returns the exit code. Errors are reported on `err`.
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Runs an already parsed config.
int run_config(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace varprin

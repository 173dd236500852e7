#pragma once

// Structured text reports: "[section]" markers followed by "key = value" lines.
// Reals use 17 significant digits so equal runs give equal bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssb/specfile.hpp"

namespace ssb {

std::string format_real(double v);

class Report {
 public:
  void section(const std::string& name);
  void put(const std::string& key, double v);
  void put(const std::string& key, int v);
  void put(const std::string& key, std::size_t v);
  void put(const std::string& key, bool v);
  void put(const std::string& key, const std::string& v);
  void put(const std::string& key, const char* v) { put(key, std::string(v)); }

  const std::string& str() const noexcept { return text_; }

 private:
  std::string text_;
};

struct RunOptions {
  std::optional<int> depth;
  std::optional<double> tol;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

struct RunOutput {
  std::string report;
  std::optional<std::string> svg;
};

const std::vector<std::string>& command_names();

/// Runs one analysis command. Throws std::invalid_argument for unknown commands and lets
/// library errors (BudgetExceeded, Unsupported, ...) propagate.
RunOutput run_command(const std::string& command, const SpecFile& spec, const RunOptions& opts);

}  // namespace ssb

#pragma once

// JSON scenario files: a "kind" tag, a kind-specific payload and an optional
// "expect" block compared key by key against the computed results.

#include "ballfix/report.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ballfix {

struct RunReport {
  std::string scenario;
  std::string kind;
  /// Result keys in insertion order, values as compact JSON text.
  std::vector<std::pair<std::string, std::string>> results;
  ConditionReport checks;
  std::vector<std::string> mismatches;
  double seconds = 0;

  const std::string* result(const std::string& key) const;
  int exit_code() const noexcept { return mismatches.empty() ? 0 : 1; }
};

/// Parse errors carry line and column.
RunReport run_scenario_text(const std::string& text, const std::string& name = "<text>");
/// Parse error when the file cannot be read.
RunReport run_scenario_file(const std::string& path);

/// Human-readable lines, or one JSON object in scenario syntax.
std::string format_report(const RunReport& report, bool structured);

}  // namespace ballfix

#pragma once

#include "ballfix/point_set.hpp"

#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ballfix {

/// One verified condition. `tag` names the hypothesis being tested
/// ("C1", "SC2", "U2", "UAT3", ...). When `holds` is false the witness fields
/// describe the counterexample.
struct Check {
  std::string tag;
  bool holds = true;
  bool evaluated = true;
  std::string detail;
  std::vector<PointId> points;
  std::optional<PointSet> ball;
};

struct ConditionReport {
  std::deque<Check> checks;
  /// Set when the verdict was obtained from sampled orbits rather than
  /// exhaustive enumeration.
  bool sampled = false;

  bool passed() const;
  bool holds(std::string_view tag) const;
  const Check& at(std::string_view tag) const;
  const Check* find(std::string_view tag) const;
  Check& add(std::string tag);
};

enum class Outcome { FixedPointFound, HypothesisViolated, BudgetExhausted, CertificateReached };

std::string_view to_string(Outcome outcome);

}  // namespace ballfix

#pragma once

// Exhaustive sweeps over small instances: every solver answer is confirmed
// by a brute-force fixed point scan, and any disagreement with a theorem is
// recorded as a counterexample.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace ballfix {

struct SweepSummary {
  std::string family;
  std::size_t instances = 0;
  /// Named tallies ("C-pass", "strong", ...).
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> counterexamples;
  double seconds = 0;

  bool ok() const noexcept { return counterexamples.empty(); }
};

inline constexpr std::size_t kMaxNfptSweepPoints = 4;
inline constexpr std::size_t kMaxNfptSweepBalls = 6;
inline constexpr std::size_t kMaxGfptSweepPoints = 3;
inline constexpr std::size_t kMaxTopoSweepPoints = 4;

/// Ball collections of at most `max_balls` nonempty subsets of X, one per
/// relabeling class, with every self-map: C1–C3 must give a fixed point
/// through the nest solver and CU1–CU3 a unique one through iterated images.
SweepSummary sweep_nfpt(std::size_t max_points = 3, std::size_t max_balls = 5, std::size_t jobs = 1);

/// Every self-map with every assignment of nonempty subsets, the space being
/// the assigned balls. SC1, SC2 and the nest hypothesis must give a fixed
/// point from every start; SC1–SC3 must give one by scan.
SweepSummary sweep_gfpt(std::size_t max_points = 3, std::size_t jobs = 1);

/// Topologies up to relabeling with every closed self-map: completeness of
/// the closed-set ball space, topn verdicts against fixed point scans,
/// top3 instances against the orbit axioms, and the J-lemma chain.
SweepSummary sweep_topo(std::size_t max_points = 3, std::size_t jobs = 1);

/// BoundExceeded for families or bounds outside the caps; Parse for an
/// unknown family.
SweepSummary run_sweep(const std::string& family, std::size_t max_points, std::size_t max_balls, std::size_t jobs);

std::string format_summary(const SweepSummary& s);

}  // namespace ballfix

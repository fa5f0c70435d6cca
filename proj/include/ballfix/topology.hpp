#pragma once

// Finite topological spaces as bitmask families of open sets, closed maps,
// the fixed point hypotheses on invariant closed sets, and J-contractions.

#include "ballfix/ball_space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ballfix {

using Mask = std::uint32_t;

class FiniteTopology {
 public:
  static constexpr std::size_t kMaxPoints = 16;

  /// Precondition unless the family contains ∅ and X and is closed under
  /// pairwise union and intersection.
  FiniteTopology(std::size_t n, std::vector<Mask> opens, std::vector<std::string> names = {});

  static FiniteTopology discrete(std::size_t n);
  static FiniteTopology indiscrete(std::size_t n);
  /// Points o (open) and c (closed).
  static FiniteTopology sierpinski();
  static FiniteTopology from_names(std::vector<std::string> names, const std::vector<std::vector<std::string>>& opens);

  std::size_t size() const noexcept { return names_.size(); }
  Mask full() const noexcept { return size() == 32 ? ~Mask{0} : (Mask{1} << size()) - 1; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  PointId point(const std::string& name) const;
  /// Sorted ascending.
  const std::vector<Mask>& opens() const noexcept { return opens_; }
  const std::vector<Mask>& closed_sets() const noexcept { return closed_; }
  bool is_open(Mask m) const;
  bool is_closed(Mask m) const;
  /// Smallest closed superset.
  Mask closure(Mask m) const;

  /// No clopen set other than ∅ and X.
  bool is_connected() const;
  /// Distinct points lie in disjoint opens.
  bool is_hausdorff() const;

  /// Nonempty closed sets as balls.
  BallSpace closed_ball_space() const;
  PointSet to_set(Mask m) const;
  Mask to_mask(const PointSet& s) const;
  std::string format(Mask m) const;

  /// Subspace on the points of B with opens U ∩ B, points renumbered in order.
  FiniteTopology subspace(Mask b) const;
  /// Least open family over all relabelings.
  std::vector<Mask> canonical_form() const;

 private:
  std::vector<std::string> names_;
  std::vector<Mask> opens_;
  std::vector<Mask> closed_;
};

Mask image_mask(const SelfMap& f, Mask m);

struct ClosedMapVerdict {
  bool closed = true;
  /// First closed set whose image is not closed.
  std::optional<Mask> witness;
};

ClosedMapVerdict is_closed_map(const FiniteTopology& top, const SelfMap& f);

enum class TopnVerdict { Strong, Weak, Fails };

std::string to_string(TopnVerdict v);

struct TopnReport {
  TopnVerdict verdict = TopnVerdict::Fails;
  /// Nonempty closed B with f(B) ⊆ B.
  std::vector<Mask> invariant_closed;
  /// Fails: an invariant closed set with no closed f-contracting subset.
  /// Weak: an invariant closed set that is not itself f-contracting.
  std::optional<Mask> witness;
  std::string detail;
};

/// Precondition unless f is a closed map.
TopnReport check_topn_hypotheses(const FiniteTopology& top, const SelfMap& f);

/// Nest solver for the weak verdict, iterated images for the strong one,
/// over the nonempty closed sets. A failing hypothesis is reported as
/// HypothesisViolated with tag "topn".
FixedPointReport solve_topn(const FiniteTopology& top, const SelfMap& f);

/// Intersection of all closed B with x ∈ B and f(B) ⊆ B.
Mask smallest_invariant_closed(const FiniteTopology& top, const SelfMap& f, PointId x);
BallAssignment smallest_invariant_assignment(const FiniteTopology& top, const SelfMap& f);
/// Every non-fixed x has a closed B with x ∈ B and x ∉ f(B) ⊆ B.
bool top3_hypothesis(const FiniteTopology& top, const SelfMap& f);

struct JContractionVerdict {
  bool holds = true;
  /// False when the cover cap stopped the enumeration.
  bool complete = true;
  std::size_t covers_checked = 0;
  std::optional<std::vector<Mask>> failing_cover;
  std::string detail;
};

inline constexpr std::size_t kDefaultCoverCap = 1u << 16;

/// Every open cover (antichains of nonempty opens with union X) has an open
/// refinement 𝒱 covering X with f(cl V) ⊆ V′ for some V′ ∈ 𝒱, for each V ∈ 𝒱.
JContractionVerdict check_j_contraction(const FiniteTopology& top, const SelfMap& f,
                                        std::size_t cover_cap = kDefaultCoverCap);

/// The largest family of nonempty opens inside members of `cover` that is
/// J-contractive; a refinement exists iff this family covers X.
std::vector<Mask> greatest_j_refinement(const FiniteTopology& top, const SelfMap& f, const std::vector<Mask>& cover);

/// All antichain open covers of X, at most `cap` of them.
std::vector<std::vector<Mask>> open_covers(const FiniteTopology& top, std::size_t cap, bool* truncated = nullptr);

struct JLemmaReport {
  /// "connected", "Hausdorff", "J-contraction", then "J1", "J2" and
  /// "strong-topn" when the preconditions hold.
  ConditionReport checks;
  bool preconditions = false;
  std::string detail;
};

JLemmaReport check_j_lemmas(const FiniteTopology& top, const SelfMap& f);

/// Every topology on n points (n ≤ 4), optionally one per relabeling class.
std::vector<FiniteTopology> enumerate_topologies(std::size_t n, bool up_to_relabeling = true);

/// Every self-map of {0, ..., n−1}.
std::vector<SelfMap> all_self_maps(std::size_t n);

}  // namespace ballfix

#pragma once

// Finite ultrametric spaces with values in a (possibly partial) order,
// their ball spaces, and the ultrametric fixed point and attractor solvers.

#include "ballfix/ball_space.hpp"
#include "ballfix/value_poset.hpp"

#include <functional>
#include <optional>
#include <random>
#include <utility>

namespace ballfix {

class UltrametricSpace {
 public:
  enum class Validation { Full, Trusted };

  /// `dist` is row-major n×n with value ids of `values`. Full validation runs
  /// check_axioms and throws Precondition on the first failure.
  UltrametricSpace(std::vector<std::string> names, ValuePoset values, std::vector<ValueId> dist,
                   Validation validation = Validation::Full);

  static UltrametricSpace unnamed(std::size_t n, ValuePoset values, std::vector<ValueId> dist,
                                  Validation validation = Validation::Full);

  std::size_t size() const noexcept { return names_.size(); }
  const ValuePoset& values() const noexcept { return values_; }
  std::span<const std::string> names() const noexcept { return names_; }
  const std::string& name(PointId p) const { return names_.at(p); }
  PointId point(std::string_view name) const;

  ValueId d(PointId x, PointId y) const { return dist_[x * size() + y]; }
  bool leq(ValueId a, ValueId b) const { return values_.leq_id(a, b); }
  bool lt(ValueId a, ValueId b) const { return values_.lt_id(a, b); }

  /// U1, U2, U3 and, for totally ordered values, UT. U2 quantifies over every
  /// γ of the value poset.
  ConditionReport check_axioms() const;

  /// B(x,y) = {z : d(x,z) ≤ d(x,y)}.
  PointSet ball(PointId x, PointId y) const;
  /// All distinct balls B(x,y).
  BallSpace ball_space() const;

 private:
  std::vector<std::string> names_;
  ValuePoset values_;
  std::vector<ValueId> dist_;
};

bool um_ball_contains(const UltrametricSpace& space, PointId x, PointId y, PointId z);

/// B(t,z) ⊆ B(x,y) decided by "t ∈ B(x,y) and d(t,z) ≤ d(x,y)". The answer is
/// cross-checked against the extensional inclusion (InternalAssertion on
/// disagreement).
bool um_ball_leq(const UltrametricSpace& space, PointId t, PointId z, PointId x, PointId y);

struct ContractingVerdict {
  bool holds = true;
  std::optional<std::pair<PointId, PointId>> witness;
  bool sampled = false;
};

/// d(fx,fy) ≤ d(x,y) for all pairs.
ContractingVerdict is_contracting(const UltrametricSpace& space, const SelfMap& f);

/// x ↦ B(x,fx)
BallAssignment sufpt_assignment(const UltrametricSpace& space, const SelfMap& f);

/// "scoo": x ≠ fx ⇒ some i ≥ 1 with d(f^i x, f^{i+1} x) < d(x,fx), searched up
/// to the first repetition of the orbit. "SUFPTc": d(z,fx) ≤ d(fx,f²x) ⇒
/// d(z,fz) ≤ d(x,fx) for all x, z.
ConditionReport check_sufpt_hypotheses(const UltrametricSpace& space, const SelfMap& f);

/// Runs the orbit f-nest solver with B_x = B(x,fx). SC1 and SC2 are
/// re-checked on the assignment first; a failure there is reported as a
/// hypothesis violation naming the axiom.
FixedPointReport solve_sufpt(const UltrametricSpace& space, const SelfMap& f,
                             std::size_t budget = kDefaultBudget, PointId start = 0);

/// Conclusions of the contracting-map lemma: "contracting" (precondition),
/// "zinBx" (B_z ⊆ B_x for z ∈ B_x), "fBx" (f(B_x) ⊆ B_x), "Bfx" (B_fx ⊆ B_x),
/// and "SC3".
ConditionReport check_csco(const UltrametricSpace& space, const SelfMap& f);

// ---------------------------------------------------------------------------
// Attractors

/// Conditions AT1 and AT2 for a weak f-attractor z′, with B_x and B′_x given
/// explicitly on finite spaces.
ConditionReport check_attractor_conditions(const SelfMap& f, const BallAssignment& assign,
                                           std::span<const PointId> phi, const BallAssignment& target_assign,
                                           PointId z_prime);

struct AttractorReport {
  std::optional<PointId> preimage;
  FixedPointReport run;
  /// Steps at which the chooser was consulted and its answers validated.
  std::size_t validated_steps = 0;
  /// AT1/AT2 on the part of f that was constructed.
  ConditionReport attractor_checks;
};

using AttractorChooser = std::function<PointId(PointId)>;

/// Builds f as in the attractor construction (fx = x when φx = z′, otherwise
/// the chooser's y) lazily along the run and validates every chooser answer:
/// UAT1 strictly, UAT2 by enumerating B(x,y), UAT3 against every t of the
/// domain. Violations throw ContractViolation naming the condition.
AttractorReport solve_attractor(const UltrametricSpace& domain, const UltrametricSpace& codomain,
                                std::span<const PointId> phi, PointId z_prime, const AttractorChooser& chooser,
                                PointId start = 0, std::size_t budget = kDefaultBudget);

/// "UAT3'" with conclusion d(z,fz) < d(x,fx), and "UAT3'-comparable" with the
/// weaker conclusion that the two distances are comparable.
ConditionReport check_uat3_prime(const UltrametricSpace& domain, const UltrametricSpace& codomain,
                                 const SelfMap& f, std::span<const PointId> phi, PointId z_prime);

// ---------------------------------------------------------------------------
// Random test spaces

/// Hierarchical clustering over the chain 0 < 1 < ... < levels.
UltrametricSpace random_chain_ultrametric(std::size_t n, std::size_t levels, std::mt19937_64& rng);

/// Product of two ultrametric spaces over the product value poset.
UltrametricSpace product_ultrametric(const UltrametricSpace& a, const UltrametricSpace& b);

/// Subspace on the given points (in order).
UltrametricSpace subspace(const UltrametricSpace& space, std::span<const PointId> points);

/// Random symmetric tables over `values`, kept when U1–U3 hold.
std::optional<UltrametricSpace> random_poset_ultrametric(std::size_t n, const ValuePoset& values,
                                                         std::mt19937_64& rng, std::size_t attempts = 1000);

}  // namespace ballfix

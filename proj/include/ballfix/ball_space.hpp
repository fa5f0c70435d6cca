#pragma once

// Finite ball spaces, self-maps, nests, and the three general fixed point
// solvers (nest of f-contracting balls, iterated images, orbit f-nests).

#include "ballfix/error.hpp"
#include "ballfix/point_set.hpp"
#include "ballfix/report.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ballfix {

inline constexpr std::size_t kDefaultBudget = 1u << 20;

/// A ground set of named points together with a nonempty collection of
/// nonempty distinguished subsets. Ball identity is extensional: duplicate
/// subsets are merged at construction.
class BallSpace {
 public:
  BallSpace(std::vector<std::string> point_names, std::vector<PointSet> balls);

  /// Points are named by their index ("0", "1", ...).
  static BallSpace unnamed(std::size_t points, std::vector<PointSet> balls);
  static BallSpace from_names(std::vector<std::string> point_names,
                              const std::vector<std::vector<std::string>>& balls);

  std::size_t size() const noexcept { return names_.size(); }
  std::span<const PointSet> balls() const noexcept { return balls_; }
  const PointSet& ball(std::size_t i) const { return balls_.at(i); }
  std::size_t ball_count() const noexcept { return balls_.size(); }
  std::span<const std::string> names() const noexcept { return names_; }
  const std::string& name(PointId p) const { return names_.at(p); }

  std::optional<std::size_t> find_ball(const PointSet& s) const;
  bool is_ball(const PointSet& s) const { return find_ball(s).has_value(); }
  PointId point(std::string_view name) const;
  PointSet full() const { return full_set(size()); }
  PointSet set_of(std::initializer_list<PointId> ps) const { return make_set(size(), ps); }

 private:
  std::vector<std::string> names_;
  std::vector<PointSet> balls_;
};

/// A total function on the points of a finite ball space, given as a table.
class SelfMap {
 public:
  SelfMap() = default;
  explicit SelfMap(std::vector<PointId> table);

  static SelfMap identity(std::size_t n);
  static SelfMap from_names(const BallSpace& space,
                            const std::vector<std::pair<std::string, std::string>>& pairs);

  PointId operator()(PointId p) const { return table_.at(p); }
  std::size_t size() const noexcept { return table_.size(); }
  std::span<const PointId> table() const noexcept { return table_; }

  PointSet image(const PointSet& s) const;
  bool is_fixed(PointId p) const { return table_.at(p) == p; }
  std::vector<PointId> fixed_points() const;

  void check_against(const BallSpace& space) const;

 private:
  std::vector<PointId> table_;
};

/// x ↦ B_x. Every assigned ball must belong to the space's collection.
struct BallAssignment {
  std::vector<PointSet> balls;

  const PointSet& operator[](PointId p) const { return balls.at(p); }
  std::size_t size() const noexcept { return balls.size(); }
  void check_against(const BallSpace& space) const;
};

/// Balls totally ordered by inclusion, stored largest first.
class Nest {
 public:
  Nest() = default;
  /// Throws Precondition unless `chain` is nonempty and consecutive entries
  /// satisfy chain[i+1] ⊆ chain[i].
  explicit Nest(std::vector<PointSet> chain, std::string provenance = {});

  std::span<const PointSet> chain() const noexcept { return chain_; }
  std::size_t size() const noexcept { return chain_.size(); }
  bool empty() const noexcept { return chain_.empty(); }
  const PointSet& smallest() const { return chain_.back(); }
  const PointSet& largest() const { return chain_.front(); }
  const std::string& provenance() const noexcept { return provenance_; }
  PointSet intersection() const;

 private:
  std::vector<PointSet> chain_;
  std::string provenance_;
};

struct FixedPointReport {
  Outcome outcome = Outcome::BudgetExhausted;
  std::optional<PointId> witness;
  Nest nest;
  /// Condition tag that failed (C1, C2, CU1, SC2, ...); empty unless
  /// outcome == HypothesisViolated.
  std::string violated;
  std::optional<PointSet> counterexample_ball;
  std::optional<PointId> counterexample_point;
  std::size_t iterations = 0;
  /// Index of the stage at which iteration stopped (iterated-image solver).
  std::size_t stage = 0;

  bool found() const noexcept { return outcome == Outcome::FixedPointFound; }
};

// ---------------------------------------------------------------------------
// f-contracting balls and the nest conditions

/// True iff B is a singleton {x} with f(x) = x, or f(B) ⊊ B.
bool is_f_contracting_set(const SelfMap& f, const PointSet& b);

/// As above but requires B to be a ball of `space` (InvalidBall otherwise).
bool is_f_contracting(const BallSpace& space, const SelfMap& f, const PointSet& b);

/// All maximal inclusion chains of the given balls (each chain largest first).
std::vector<std::vector<PointSet>> maximal_chains(std::span<const PointSet> balls);

/// Conditions C1, C2, C3 on a finite space. C3 is checked over every maximal
/// chain of f-contracting balls.
ConditionReport check_c_conditions(const BallSpace& space, const SelfMap& f);

/// Conditions CU1, CU2, CU3 on a finite space.
ConditionReport check_cu_conditions(const BallSpace& space, const SelfMap& f);

/// Greedy nest extension: start at an f-contracting ball, descend into an
/// f-contracting ball inside the image of the current minimum until a
/// singleton fixed point is reached. Ties go to the smallest ball, then the
/// lexicographically first. The terminal nest is completed to a maximal nest
/// of f-contracting balls.
FixedPointReport solve_nfpt1(const BallSpace& space, const SelfMap& f,
                             std::size_t budget = kDefaultBudget);

/// Iterated images B_0 = X, B_{k+1} = f(B_k) until the sequence stabilises;
/// each stage must be an f-contracting ball. The returned fixed point is
/// checked to be the only one.
FixedPointReport solve_nfpt2(const BallSpace& space, const SelfMap& f,
                             std::size_t budget = kDefaultBudget);

// ---------------------------------------------------------------------------
// Orbit assignments

/// Sets S ⊆ X closed under f whose balls {B_x : x ∈ S} form a chain.
struct FNest {
  PointSet generators;
  Nest nest;
};

/// Every f-nest of a finite space. Exhaustive over subsets, so limited to
/// spaces of at most `kMaxExhaustiveFNestPoints` points.
inline constexpr std::size_t kMaxExhaustiveFNestPoints = 16;
std::vector<FNest> enumerate_f_nests(const SelfMap& f, const BallAssignment& assign);

/// SC1, SC2, SC3 plus "NEST": every f-nest 𝓝 has some z ∈ ⋂𝓝 with
/// B_z ⊆ ⋂𝓝 (the intersection hypothesis of the orbit-nest theorem).
ConditionReport check_sc_axioms(const BallSpace& space, const SelfMap& f,
                                const BallAssignment& assign);

/// Same conditions without a ball space (assignment taken as-is).
ConditionReport check_sc_axioms(const SelfMap& f, const BallAssignment& assign);

/// Orbit f-nest solver on a finite space. Builds the f-nest of the orbit of
/// `start`; when the orbit cycles, takes the least z ∈ ⋂𝓝 with B_z ⊆ ⋂𝓝 and
/// restarts from z. Terminates at a fixed point or reports which hypothesis
/// failed.
FixedPointReport solve_gfpt2(const BallSpace& space, const SelfMap& f, const BallAssignment& assign,
                             std::size_t budget = kDefaultBudget, PointId start = 0);

/// Lazily evaluated variant: `f` and `ball_of` are queried only on demand.
FixedPointReport solve_gfpt2(std::size_t point_count, const std::function<PointId(PointId)>& f,
                             const std::function<PointSet(PointId)>& ball_of, PointId start,
                             std::size_t budget = kDefaultBudget);

// ---------------------------------------------------------------------------
// Spherical completeness and structural helpers

/// Finite spaces: validates well-formedness and returns true (a finite nest
/// contains its smallest ball).
bool is_spherically_complete(const BallSpace& space);

struct PreimageSpace {
  BallSpace space;
  /// target ball index → ball index in `space`
  std::vector<std::size_t> ball_map;
};

/// Balls of X1 are the preimages of the balls of `target` under `f`.
/// Throws EmptyPreimage naming the first target ball with empty preimage.
PreimageSpace preimage_space(std::span<const PointId> f, const BallSpace& target,
                             std::vector<std::string> source_names = {});

/// Pulls a nest of the target back along `f`.
Nest preimage_nest(std::span<const PointId> f, std::size_t source_size, const Nest& target_nest);

/// When the pulled-back nest has a point z in its intersection, f(z) lies in
/// the intersection of the target nest.
std::optional<PointId> transfer_intersection_point(std::span<const PointId> f,
                                                   std::size_t source_size, const Nest& target_nest);

/// Re-sorts a chain given in any order by reverse inclusion and removes
/// duplicates. Throws Precondition if the balls are not a chain.
Nest cofinal_subnest(std::span<const PointSet> balls);

/// Brute-force fixed point scan.
std::vector<PointId> brute_force_fixed_points(const SelfMap& f);

}  // namespace ballfix

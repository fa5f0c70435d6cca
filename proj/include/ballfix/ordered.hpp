#pragma once

// Order balls and ultrametric balls over Hahn series, the orbit solver for
// o-contracting maps, completeness probes for archimedean desk groups, the
// ultrametric-to-order nest transfer and hybrid ball nests.

#include "ballfix/hahn_series.hpp"
#include "ballfix/report.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace ballfix {

/// B_o(g; r) = {z : |g − z| ≤ r}.
struct OrderBall {
  HahnSeries center;
  HahnSeries radius;

  /// Precondition when r < 0.
  void validate() const;
  bool contains(const HahnSeries& z) const;
  /// Exact: |g − g′| + r ≤ r′.
  bool subset_of(const OrderBall& o) const;
};

bool order_ball_contains(const OrderBall& ball, const HahnSeries& z);

/// B_u(x, y) = {z : v(x − z) ≤ v(x − y)}, a coset of a convex subgroup.
struct UltrametricBall {
  HahnSeries x;
  HahnSeries y;

  bool contains(const HahnSeries& z) const;
  bool subset_of(const UltrametricBall& o) const;
  bool subset_of(const OrderBall& o) const;
  NaturalValue radius() const { return natural_valuation(x - y); }
};

bool subset_of(const OrderBall& inner, const UltrametricBall& outer);

// ---------------------------------------------------------------------------
// Orbit solver

using SeriesMap = std::function<HahnSeries(const HahnSeries&)>;

struct OagStep {
  HahnSeries x;
  HahnSeries fx;
  HahnSeries f2x;
};

/// Offered restart point given the nest so far; nullopt continues the orbit.
using OagChooser = std::function<std::optional<HahnSeries>(const std::vector<OrderBall>&, const OagStep&)>;

struct OagReport {
  Outcome outcome = Outcome::BudgetExhausted;
  HahnSeries witness;
  std::vector<OrderBall> nest;
  /// v(x − fx) at each visited point.
  std::vector<NaturalValue> valuation_trace;
  std::optional<std::string> violated;
  Rational C;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  int truncation = kDefaultTruncation;
};

/// Runs with C = (m/n + 1)/2 and balls B_x = B_o(x; |x − fx|/(1 − C)).
/// Checks |fx − f²x| ≤ |x − fx| and n|fx − f²x| ≤ m|x − fx| at every step
/// (SpecViolation naming the step otherwise). Stops at an exact fixed point
/// or once the leading exponent of x − fx passes T (CertificateReached).
/// Without a chooser an Aitken step is offered and kept only if valid; a
/// supplied chooser returning a point outside the nest throws
/// ContractViolation, and B_z not inside the nest reports "SC3".
OagReport solve_oag(const SeriesMap& f, long m, long n, const HahnSeries& x0, int T = kDefaultTruncation,
                    std::size_t budget = 10000, const OagChooser& chooser = {});

/// Rational C′ with C ≤ C′ < 1, given 0 < C < 1 and v(1 − C) = v(1).
Rational rational_ratio_above(const HahnSeries& C);

/// Field variant: reduces C to rational_ratio_above(C) and checks
/// |fx − f²x| ≤ C|x − fx| along the orbit.
OagReport solve_oag_field(const SeriesMap& f, const HahnSeries& C, const HahnSeries& x0,
                          int T = kDefaultTruncation, std::size_t budget = 10000);

/// x ↦ a·x + b.
SeriesMap affine_series_map(const HahnSeries& a, const HahnSeries& b);

// ---------------------------------------------------------------------------
// Archimedean desk groups

enum class DeskGroup { Integers, Dyadic, Rationals };

std::string to_string(DeskGroup g);
DeskGroup parse_desk_group(const std::string& text);

struct RationalBall {
  Rational center;
  Rational radius;

  Rational lo() const { return center - radius; }
  Rational hi() const { return center + radius; }
  bool contains(const Rational& q) const { return lo() <= q && q <= hi(); }
  bool subset_of(const RationalBall& o) const;
};

/// Level i of a nest, nullopt when the stream ends.
using RationalNestStream = std::function<std::optional<RationalBall>(std::size_t)>;

enum class AscoVerdict { MinimalBall, Nonempty, EmptySoFar };

std::string to_string(AscoVerdict v);

struct AscoReport {
  DeskGroup group = DeskGroup::Rationals;
  AscoVerdict verdict = AscoVerdict::EmptySoFar;
  std::optional<Rational> witness;
  /// Minimal ball index (integers) or the last level read.
  std::size_t level = 0;
  std::size_t levels_read = 0;
  Rational lo;
  Rational hi;
  std::string detail;
};

/// Integers: finds the smallest ball of the nest. Dyadic and rationals:
/// the point is witnessed by a radius-zero level, or by the simplest element
/// of the level intervals staying fixed over the second half of at least
/// eight levels; otherwise the verdict is empty-so-far with the last interval.
/// Precondition when the stream is not a nest of balls of the group.
AscoReport check_asco(DeskGroup group, const RationalNestStream& stream, std::size_t budget);

/// The rational of least denominator in [lo, hi], least absolute value among those.
Rational simplest_rational(const Rational& lo, const Rational& hi);
/// Same for dyadic rationals.
Rational simplest_dyadic(const Rational& lo, const Rational& hi);

/// Closed bisection intervals of [lo, hi] toward the cut {q : below(q)}.
RationalNestStream bisection_nest(std::function<bool(const Rational&)> below, Rational lo, Rational hi);

/// q ↦ q² < 2 bisected from [1, 2].
RationalNestStream sqrt2_nest();

// ---------------------------------------------------------------------------
// Ultrametric nests to order nests

struct ScoscuReport {
  ConditionReport checks;
  /// B^μ = B_o(x_{μ+1}; |x_μ − y_μ|).
  std::vector<OrderBall> order_nest;
  std::size_t probes = 0;
  int truncation = kDefaultTruncation;
};

/// Checks "B^mu in Bu", "Bu next in B^mu", "order nest" and "intersection"
/// (membership in the ultrametric prefix intersection sandwiched by the
/// order-nest intersection on probe points, which include the centers,
/// Σ_{i<T} t^i and perturbations of the last center). Precondition unless
/// the pairs form a strictly descending ultrametric nest.
ScoscuReport scoscu_transfer(const std::vector<std::pair<HahnSeries, HahnSeries>>& pairs,
                             int T = kDefaultTruncation, const std::vector<HahnSeries>& extra_probes = {});

/// Strictly descending ultrametric nest of the given depth.
std::vector<std::pair<HahnSeries, HahnSeries>> random_ultrametric_nest(std::size_t depth, std::mt19937_64& rng);

/// Σ_{i<k} t^i.
HahnSeries geometric_partial_sum(int k);

// ---------------------------------------------------------------------------
// Hybrid ball spaces

enum class CoefficientField { Rationals, Dyadic, RealsSymbolic };

std::string to_string(CoefficientField c);
CoefficientField parse_coefficient_field(const std::string& text);

using HybridBall = std::variant<UltrametricBall, RationalBall>;

OrderBall as_order_ball(const RationalBall& b);
bool hybrid_contains(const HybridBall& b, const HahnSeries& z);
bool hybrid_subset(const HybridBall& inner, const HybridBall& outer);
std::string to_string(const HybridBall& b);

struct HybridReport {
  /// "ultrametric" or "rational-order": the class of the cofinal subnest.
  std::string cofinal_class;
  std::vector<std::size_t> cofinal_indices;
  /// nullopt when undecided within budget.
  std::optional<bool> nonempty;
  std::optional<HahnSeries> witness;
  std::optional<AscoReport> residue;
  int truncation = kDefaultTruncation;
  std::string detail;
};

/// Validates the nest, locates the cofinal single-class subnest and applies
/// the matching check. Ultrametric-cofinal nests are witnessed by the last
/// center. Rational-order-cofinal nests go through check_asco on the
/// rational tail; the real coefficient field is answered symbolically.
HybridReport check_hybrid(CoefficientField field, const std::vector<HybridBall>& nest, std::size_t budget,
                          int T = kDefaultTruncation);

/// Cofinal rational-order tail: level i of the stream continues the prefix.
HybridReport check_hybrid(CoefficientField field, const std::vector<HybridBall>& prefix,
                          const RationalNestStream& tail, std::size_t budget, int T = kDefaultTruncation);

}  // namespace ballfix

#pragma once

// Exact-rational contraction iteration in Q^n with the maximum metric:
// orbit balls, the self-contraction checks along an orbit, a tolerance
// solver returning a certificate ball, and the uniqueness argument.

#include "ballfix/error.hpp"
#include "ballfix/report.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ballfix {

using Rational = mpq_class;

/// "3/4", "-2", "0.5" style literals; Parse error otherwise.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

struct RationalPoint {
  std::vector<Rational> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  friend bool operator==(const RationalPoint& a, const RationalPoint& b) { return a.coords == b.coords; }
};

RationalPoint parse_point(const std::string& text);
std::string to_string(const RationalPoint& p);

/// max_i |a_i − b_i|; DomainMismatch on different dimensions.
Rational max_dist(const RationalPoint& a, const RationalPoint& b);

struct MetricBall {
  RationalPoint center;
  Rational radius;

  bool contains(const RationalPoint& y) const { return max_dist(center, y) <= radius; }
  /// Sufficient inclusion test d(c, c′) + r′ ≤ r; in the maximum metric on Q^n
  /// it is also necessary.
  bool contains(const MetricBall& inner) const { return max_dist(center, inner.center) + inner.radius <= radius; }
};

struct ContractionSpec {
  enum class Mode { Strict, OrbitStrict };

  std::function<RationalPoint(const RationalPoint&)> f;
  Rational C;
  Mode mode = Mode::OrbitStrict;

  /// Throws Precondition unless 0 < C < 1.
  void validate() const;
};

/// Center x, radius d(x,fx)/(1−C).
MetricBall orbit_ball(const ContractionSpec& spec, const RationalPoint& x);

/// Smallest i ≥ 1 with C^i/(1−C) < 1/2.
std::size_t strict_drop_index(const Rational& C);

struct BanachOrbitReport {
  ConditionReport checks;
  std::vector<RationalPoint> orbit;
  std::size_t drop_index = 0;
};

/// Along x0, f x0, ..., f^L x0: "ratio" (d(f^{k+1},f^{k+2}) ≤ C d(f^k,f^{k+1}),
/// SpecViolation naming the step otherwise), "contracting" (pairwise on the
/// orbit), "SC1", "SC2-nesting" (d(x,fx) + r(B_fx) ≤ r(B_x)),
/// "SC2-drop" (x or fx outside B_{f^i x} for the drop index i when x ≠ fx),
/// "geometric" (d(x0, f^i x0) ≤ d(x0,fx0)/(1−C)), "SC3-estimate"
/// (d(x, f^i x) + r(B_{f^i x}) ≤ C^{i−1}(C+1)/(1−C)·d(x,fx) ≤ r(B_x)) and
/// "SC3" (B_z ⊆ B_x for the last iterate z and every earlier x).
BanachOrbitReport verify_banach_sc(const ContractionSpec& spec, const RationalPoint& x0, std::size_t L);

struct BanachResult {
  RationalPoint x;
  MetricBall certificate;
  std::size_t iterations = 0;
};

/// Iterates until d(x,fx) ≤ eps(1−C); BoundExceeded when the budget runs out.
BanachResult solve_banach(const ContractionSpec& spec, const RationalPoint& x0, const Rational& eps,
                          std::size_t budget = 100000);

struct UniquenessVerdict {
  bool unique = true;
  /// For distinct candidates: d(fx,fy) and d(x,y), which strict contraction
  /// would force to satisfy d(fx,fy) < d(x,y) = d(fx,fy).
  std::optional<std::pair<Rational, Rational>> contradiction;
  std::string detail;
};

/// Both candidates must be fixed (NotAFixedPoint otherwise). Strict mode only.
UniquenessVerdict check_uniqueness(const ContractionSpec& spec, const RationalPoint& a, const RationalPoint& b);

// ---------------------------------------------------------------------------
// Affine maps v ↦ A v + b

struct AffineMap {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;

  std::size_t dim() const noexcept { return b.size(); }
  RationalPoint operator()(const RationalPoint& v) const;
  /// max_i Σ_j |A_ij|, the Lipschitz constant for the maximum metric.
  Rational max_row_sum() const;
};

/// "a11, a12, ..., b1; a21, a22, ..., b2": rows separated by ';', the last
/// entry of each row is the translation. Parse error otherwise.
AffineMap parse_affine(const std::string& text);

ContractionSpec affine_spec(const AffineMap& map, const Rational& C,
                            ContractionSpec::Mode mode = ContractionSpec::Mode::Strict);

/// Random affine map with max row sum ≤ C, small integer-ratio entries.
AffineMap random_affine_contraction(std::size_t dim, const Rational& C, std::mt19937_64& rng);

}  // namespace ballfix

#pragma once

// p-adic integers at fixed precision, their valuation, polynomials, Newton
// steps and Hensel lifting, plus the complete-by-stages checks on the
// valuation ideal pZ/p^N.

#include "ballfix/ball_space.hpp"
#include "ballfix/ultrametric.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ballfix {

/// Largest modulus p^N accepted (products are formed in 128-bit).
inline constexpr std::uint64_t kMaxPAdicModulus = std::uint64_t{1} << 62;
/// Largest modulus for exhaustive pair sweeps.
inline constexpr std::uint64_t kMaxExhaustivePAdicModulus = 10000;
inline constexpr std::size_t kMaxPolynomialDegree = 16;

bool is_prime(std::uint64_t n);

/// p^N, throwing BoundExceeded above kMaxPAdicModulus.
std::uint64_t padic_modulus(std::uint64_t p, unsigned N);

/// Value |p|^e written as the exponent e. e == N stands for "below
/// resolution", the image of 0. Larger exponents are smaller values.
struct PAdicValue {
  unsigned exponent = 0;
  unsigned precision = 1;

  bool is_zero() const noexcept { return exponent >= precision; }
  /// v², i.e. exponent doubling capped at the precision.
  PAdicValue squared() const noexcept;
  PAdicValue times(PAdicValue other) const;

  /// Ordered as values: a < b iff a.exponent > b.exponent.
  friend std::strong_ordering operator<=>(const PAdicValue& a, const PAdicValue& b) {
    return b.exponent <=> a.exponent;
  }
  friend bool operator==(const PAdicValue& a, const PAdicValue& b) { return a.exponent == b.exponent; }
};

std::string to_string(const PAdicValue& v);

class PAdicInt {
 public:
  PAdicInt(std::uint64_t p, unsigned N, std::int64_t value);

  static PAdicInt from_residue(std::uint64_t p, unsigned N, std::uint64_t residue);

  std::uint64_t prime() const noexcept { return p_; }
  unsigned precision() const noexcept { return n_; }
  std::uint64_t modulus() const noexcept { return mod_; }
  std::uint64_t residue() const noexcept { return r_; }

  /// Exponent of p in the residue (N when the residue is 0).
  unsigned valuation_exponent() const noexcept;
  PAdicValue value() const noexcept { return PAdicValue{valuation_exponent(), n_}; }
  bool is_unit() const noexcept { return r_ % p_ != 0; }
  bool in_ideal() const noexcept { return !is_unit(); }

  /// Same element at a different precision (reduction, or the canonical lift
  /// of the residue when raising).
  PAdicInt at_precision(unsigned N) const;
  /// Throws NonUnitDerivative when not a unit.
  PAdicInt inverse() const;

  PAdicInt operator+(const PAdicInt& o) const;
  PAdicInt operator-(const PAdicInt& o) const;
  PAdicInt operator*(const PAdicInt& o) const;
  PAdicInt operator-() const;
  friend bool operator==(const PAdicInt& a, const PAdicInt& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.r_ == b.r_;
  }

 private:
  PAdicInt(std::uint64_t p, unsigned N, std::uint64_t mod, std::uint64_t r) : p_(p), n_(N), mod_(mod), r_(r) {}
  void same_ring(const PAdicInt& o) const;

  std::uint64_t p_;
  unsigned n_;
  std::uint64_t mod_;
  std::uint64_t r_;
};

/// d(a,b) = v(a−b). DomainMismatch for different p or N.
PAdicValue padic_dist(const PAdicInt& a, const PAdicInt& b);

class Polynomial {
 public:
  /// Coefficients c0, c1, ..., ck; trailing zero coefficients are dropped.
  explicit Polynomial(std::vector<PAdicInt> coefficients);
  static Polynomial from_integers(const std::vector<std::int64_t>& coefficients, std::uint64_t p, unsigned N);

  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::span<const PAdicInt> coefficients() const noexcept { return coeffs_; }
  std::uint64_t prime() const noexcept { return p_; }
  unsigned precision() const noexcept { return n_; }

  PAdicInt operator()(const PAdicInt& x) const;
  Polynomial derivative() const;
  Polynomial at_precision(unsigned N) const;

 private:
  std::vector<PAdicInt> coeffs_;
  std::uint64_t p_;
  unsigned n_;
};

/// x − P(x)·P′(x)^{-1}; NonUnitDerivative when P′(x) is divisible by p.
PAdicInt newton_map(const Polynomial& P, const PAdicInt& x);

struct HenselStep {
  unsigned precision;
  std::uint64_t residue;
};

struct HenselResult {
  PAdicInt root;
  std::vector<HenselStep> trace;
};

/// Newton iteration at precisions 1, 2, 4, ..., N. Precondition unless
/// P(x0) ≡ 0 mod p; NonUnitDerivative unless P′(x0) is a unit.
HenselResult hensel_lift(const std::vector<std::int64_t>& coefficients, std::int64_t x0, std::uint64_t p,
                         unsigned N);

/// All residues r mod p with P(r) ≡ 0.
std::vector<std::uint64_t> residue_roots(const std::vector<std::int64_t>& coefficients, std::uint64_t p);

// ---------------------------------------------------------------------------
// The ideal 𝓜 = pZ/p^N and complete-by-stages checks

using PAdicMap = std::function<PAdicInt(const PAdicInt&)>;

/// The residues of 𝓜 in increasing order.
std::vector<PAdicInt> ideal_points(std::uint64_t p, unsigned N);

/// "contracting": d(fx,fy) ≤ d(x,y) on 𝓜 (exhaustive; BoundExceeded above
/// kMaxExhaustivePAdicModulus). "FPTcbs": for x ≠ fx some j ≥ 1 with
/// v(f^j x − f^{j+1} x) ≤ v(x − fx)², searched until the orbit repeats.
/// DomainMismatch naming x when f(x) leaves 𝓜.
ConditionReport check_fptcbs_hypotheses(const PAdicMap& f, std::uint64_t p, unsigned N);

/// Newton map of P transported to 𝓜 by y ↦ y + shift, i.e. the Newton map of
/// Q(y) = P(y + shift).
PAdicMap shifted_newton_map(const Polynomial& P, std::int64_t shift);

/// Ultrametric ball B(x,y) = {z : v(x−z) ≤ v(x−y)}.
struct PAdicBall {
  PAdicInt x;
  PAdicInt y;

  bool contains(const PAdicInt& z) const { return padic_dist(x, z) <= padic_dist(x, y); }
  /// B(t,z) ⊆ B(x,y) by the ball inclusion law.
  bool subset_of(const PAdicBall& o) const { return o.contains(x) && padic_dist(x, y) <= padic_dist(o.x, o.y); }
};

/// Every ball must lie in 𝓜 and the sequence must be a nest (each ball
/// inside the previous); Precondition otherwise. True iff for every ball
/// B(x,y) some ball B(x′,y′) of the nest has v(x′−y′) ≤ v(x−y)².
bool is_distinguished_nest(std::span<const PAdicBall> nest, std::uint64_t p, unsigned N);

/// Nest of B(x, fx) along the orbit of x0 until it repeats.
std::vector<PAdicBall> orbit_nest(const PAdicMap& f, const PAdicInt& x0);

/// One check per sample nest ("nest 0", "nest 1", ...): distinguished and
/// with nonempty intersection in 𝓜. Precondition on an empty sample list.
ConditionReport check_cbs_equivalence(std::uint64_t p, unsigned N,
                                      const std::vector<std::vector<PAdicBall>>& nests);

/// Residues of 𝓜 in the intersection of the nest.
std::vector<PAdicInt> nest_intersection(std::span<const PAdicBall> nest, std::uint64_t p, unsigned N);

/// Finite ultrametric space on the given residues with values
/// 0 < |p|^{N−1} < ... < |p|^0 (value id k is the exponent N−k).
UltrametricSpace padic_ultrametric(std::span<const PAdicInt> points);
UltrametricSpace padic_ultrametric_all(std::uint64_t p, unsigned N);
UltrametricSpace padic_ultrametric_ideal(std::uint64_t p, unsigned N);

/// Index of each residue in `points` (lookup table by residue).
std::vector<PointId> residue_index(std::span<const PAdicInt> points);

}  // namespace ballfix

#pragma once

// Finitely supported formal sums Σ c_k t^k with rational coefficients and
// integer exponents, ordered so that t is a positive infinitesimal.

#include "ballfix/banach.hpp"

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ballfix {

inline constexpr int kDefaultTruncation = 32;

class HahnSeries {
 public:
  using Term = std::pair<int, Rational>;

  HahnSeries() = default;
  /// Terms in any order; like exponents are merged and zeros dropped.
  explicit HahnSeries(std::vector<Term> terms);

  static HahnSeries constant(const Rational& c);
  static HahnSeries monomial(const Rational& c, int exponent);
  static HahnSeries t(int exponent = 1) { return monomial(1, exponent); }

  /// "3/2 + 2t^1 - 1/4t^3", "t", "-t^2", "0". Parse error otherwise.
  static HahnSeries parse(const std::string& text);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<int> leading_exponent() const;
  Rational leading_coefficient() const;
  Rational coefficient(int exponent) const;
  /// −1, 0 or 1: the sign of the leading coefficient.
  int sign() const;

  HahnSeries operator+(const HahnSeries& o) const;
  HahnSeries operator-(const HahnSeries& o) const;
  HahnSeries operator-() const;
  HahnSeries operator*(const HahnSeries& o) const;
  HahnSeries operator*(const Rational& q) const;
  HahnSeries operator/(const Rational& q) const;
  HahnSeries& operator+=(const HahnSeries& o) { return *this = *this + o; }

  HahnSeries abs() const { return sign() < 0 ? -*this : *this; }
  /// Terms with exponent ≤ T.
  HahnSeries truncated(int T) const;
  /// Multiplicative inverse with every exponent ≤ T kept. Precondition on 0.
  HahnSeries inverse(int T = kDefaultTruncation) const;

  friend bool operator==(const HahnSeries&, const HahnSeries&) = default;
  friend std::strong_ordering operator<=>(const HahnSeries& a, const HahnSeries& b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  std::vector<Term> terms_;
};

std::string to_string(const HahnSeries& s);

struct DivisionResult {
  HahnSeries quotient;
  /// True when the long division terminated with remainder 0.
  bool exact = false;
};

/// Long division by leading terms; stops when the remainder vanishes or the
/// next quotient exponent passes T.
DivisionResult divide(const HahnSeries& num, const HahnSeries& den, int T = kDefaultTruncation);

/// Archimedean class of a: the leading exponent, or the bottom class for 0.
/// Smaller exponents are larger classes.
struct NaturalValue {
  std::optional<int> exponent;

  bool is_zero() const noexcept { return !exponent; }
  /// v(ab) = va·vb: exponent addition.
  NaturalValue times(const NaturalValue& o) const;

  friend bool operator==(const NaturalValue&, const NaturalValue&) = default;
  friend std::strong_ordering operator<=>(const NaturalValue& a, const NaturalValue& b) {
    if (!a.exponent || !b.exponent) return a.exponent.has_value() <=> b.exponent.has_value();
    return *b.exponent <=> *a.exponent;
  }
};

std::string to_string(const NaturalValue& v);

NaturalValue natural_valuation(const HahnSeries& a);
bool archimedean_equivalent(const HahnSeries& a, const HahnSeries& b);
/// a ≪ b: v(a) < v(b).
bool infinitesimally_smaller(const HahnSeries& a, const HahnSeries& b);

}  // namespace ballfix

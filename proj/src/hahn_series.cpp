#include "ballfix/hahn_series.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ballfix {

HahnSeries::HahnSeries(std::vector<Term> terms) {
  std::map<int, Rational> merged;
  for (auto& [e, c] : terms) merged[e] += c;
  for (auto& [e, c] : merged) {
    c.canonicalize();
    if (c != 0) terms_.emplace_back(e, c);
  }
}

HahnSeries HahnSeries::constant(const Rational& c) { return HahnSeries({{0, c}}); }

HahnSeries HahnSeries::monomial(const Rational& c, int exponent) { return HahnSeries({{exponent, c}}); }

std::optional<int> HahnSeries::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().first;
}

Rational HahnSeries::leading_coefficient() const { return terms_.empty() ? Rational(0) : terms_.front().second; }

Rational HahnSeries::coefficient(int exponent) const {
  for (const auto& [e, c] : terms_)
    if (e == exponent) return c;
  return 0;
}

int HahnSeries::sign() const {
  if (terms_.empty()) return 0;
  return terms_.front().second > 0 ? 1 : -1;
}

HahnSeries HahnSeries::operator+(const HahnSeries& o) const {
  HahnSeries out;
  auto a = terms_.begin(), b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      out.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      out.terms_.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (c != 0) out.terms_.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  return out;
}

HahnSeries HahnSeries::operator-() const {
  HahnSeries out = *this;
  for (auto& term : out.terms_) term.second = -term.second;
  return out;
}

HahnSeries HahnSeries::operator-(const HahnSeries& o) const { return *this + (-o); }

HahnSeries HahnSeries::operator*(const HahnSeries& o) const {
  std::vector<Term> prod;
  prod.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) prod.emplace_back(ea + eb, ca * cb);
  return HahnSeries(std::move(prod));
}

HahnSeries HahnSeries::operator*(const Rational& q) const {
  if (q == 0) return {};
  Rational k = q;
  k.canonicalize();
  HahnSeries out = *this;
  for (auto& term : out.terms_) term.second *= k;
  return out;
}

HahnSeries HahnSeries::operator/(const Rational& q) const {
  if (q == 0) throw Error(ErrorKind::Precondition, "division by zero");
  return *this * Rational(1 / q);
}

HahnSeries HahnSeries::truncated(int T) const {
  HahnSeries out;
  for (const auto& term : terms_)
    if (term.first <= T) out.terms_.push_back(term);
  return out;
}

DivisionResult divide(const HahnSeries& num, const HahnSeries& den, int T) {
  if (den.is_zero()) throw Error(ErrorKind::Precondition, "division by the zero series");
  const int e0 = *den.leading_exponent();
  const Rational c0 = den.leading_coefficient();
  std::vector<HahnSeries::Term> q;
  HahnSeries rem = num;
  while (!rem.is_zero()) {
    const int e = *rem.leading_exponent() - e0;
    if (e > T) break;
    const Rational c = rem.leading_coefficient() / c0;
    q.emplace_back(e, c);
    rem = rem - den * HahnSeries::monomial(c, e);
  }
  return DivisionResult{HahnSeries(std::move(q)), rem.is_zero()};
}

HahnSeries HahnSeries::inverse(int T) const {
  if (is_zero()) throw Error(ErrorKind::Precondition, "the zero series has no inverse");
  return divide(constant(1), *this, T).quotient;
}

HahnSeries HahnSeries::parse(const std::string& text) {
  auto fail = [&](const std::string& why) { return Error(ErrorKind::Parse, why + " in series '" + text + "'"); };
  std::vector<Term> terms;
  std::size_t i = 0;
  auto skip = [&]() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i == text.size()) throw fail("empty literal");
  bool first = true;
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;
    std::string coeff;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.'))
      coeff += text[i++];
    skip();
    Rational c = coeff.empty() ? Rational(1) : parse_rational(coeff);
    int exponent = 0;
    if (i < text.size() && text[i] == 't') {
      ++i;
      exponent = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::string digits;
        if (i < text.size() && text[i] == '-') digits += text[i++];
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
        if (digits.empty() || digits == "-") throw fail("missing exponent");
        exponent = std::stoi(digits);
      }
    } else if (coeff.empty()) {
      throw fail("missing coefficient");
    }
    terms.emplace_back(exponent, sign * c);
    skip();
  }
  return HahnSeries(std::move(terms));
}

std::string to_string(const HahnSeries& s) {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : s.terms()) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    first = false;
    if (e == 0) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str();
      out += "t^" + std::to_string(e);
    }
  }
  return out;
}

NaturalValue NaturalValue::times(const NaturalValue& o) const {
  if (!exponent || !o.exponent) return {};
  return NaturalValue{*exponent + *o.exponent};
}

std::string to_string(const NaturalValue& v) {
  if (!v.exponent) return "0";
  return "v(t^" + std::to_string(*v.exponent) + ")";
}

NaturalValue natural_valuation(const HahnSeries& a) { return NaturalValue{a.leading_exponent()}; }

bool archimedean_equivalent(const HahnSeries& a, const HahnSeries& b) {
  return natural_valuation(a) == natural_valuation(b);
}

bool infinitesimally_smaller(const HahnSeries& a, const HahnSeries& b) {
  return natural_valuation(a) < natural_valuation(b);
}

}  // namespace ballfix

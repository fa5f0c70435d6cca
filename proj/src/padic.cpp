#include "ballfix/padic.hpp"

#include <algorithm>

namespace ballfix {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t padic_modulus(std::uint64_t p, unsigned N) {
  if (!is_prime(p)) throw Error(ErrorKind::Precondition, std::to_string(p) + " is not prime");
  if (N == 0) throw Error(ErrorKind::Precondition, "precision must be at least 1");
  std::uint64_t m = 1;
  for (unsigned i = 0; i < N; ++i) {
    if (m > kMaxPAdicModulus / p)
      throw Error(ErrorKind::BoundExceeded, "p^N exceeds 2^62 for p=" + std::to_string(p) + ", N=" + std::to_string(N));
    m *= p;
  }
  return m;
}

PAdicValue PAdicValue::squared() const noexcept { return PAdicValue{std::min(2 * exponent, precision), precision}; }

PAdicValue PAdicValue::times(PAdicValue other) const {
  if (other.precision != precision) throw Error(ErrorKind::DomainMismatch, "values at different precisions");
  return PAdicValue{std::min(exponent + other.exponent, precision), precision};
}

std::string to_string(const PAdicValue& v) {
  if (v.is_zero()) return "0";
  return "|p|^" + std::to_string(v.exponent);
}

// ---------------------------------------------------------------------------

PAdicInt::PAdicInt(std::uint64_t p, unsigned N, std::int64_t value) : p_(p), n_(N), mod_(padic_modulus(p, N)) {
  const auto m = static_cast<__int128>(mod_);
  __int128 r = static_cast<__int128>(value) % m;
  if (r < 0) r += m;
  r_ = static_cast<std::uint64_t>(r);
}

PAdicInt PAdicInt::from_residue(std::uint64_t p, unsigned N, std::uint64_t residue) {
  const std::uint64_t m = padic_modulus(p, N);
  return PAdicInt(p, N, m, residue % m);
}

unsigned PAdicInt::valuation_exponent() const noexcept {
  if (r_ == 0) return n_;
  unsigned e = 0;
  for (std::uint64_t r = r_; r % p_ == 0; r /= p_) ++e;
  return e;
}

PAdicInt PAdicInt::at_precision(unsigned N) const { return from_residue(p_, N, r_); }

PAdicInt PAdicInt::inverse() const {
  if (!is_unit())
    throw Error(ErrorKind::NonUnitDerivative, std::to_string(r_) + " is not a unit mod " + std::to_string(p_));
  __int128 a = r_, b = mod_, x0 = 1, x1 = 0;
  while (b != 0) {
    const __int128 q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
  }
  __int128 inv = x0 % static_cast<__int128>(mod_);
  if (inv < 0) inv += mod_;
  return PAdicInt(p_, n_, mod_, static_cast<std::uint64_t>(inv));
}

void PAdicInt::same_ring(const PAdicInt& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw Error(ErrorKind::DomainMismatch, "p-adic operands with different p or N");
}

PAdicInt PAdicInt::operator+(const PAdicInt& o) const {
  same_ring(o);
  return PAdicInt(p_, n_, mod_, static_cast<std::uint64_t>((static_cast<__int128>(r_) + o.r_) % mod_));
}

PAdicInt PAdicInt::operator-(const PAdicInt& o) const {
  same_ring(o);
  return PAdicInt(p_, n_, mod_, static_cast<std::uint64_t>((static_cast<__int128>(r_) + mod_ - o.r_) % mod_));
}

PAdicInt PAdicInt::operator*(const PAdicInt& o) const {
  same_ring(o);
  return PAdicInt(p_, n_, mod_, static_cast<std::uint64_t>((static_cast<__int128>(r_) * o.r_) % mod_));
}

PAdicInt PAdicInt::operator-() const { return PAdicInt(p_, n_, mod_, r_ == 0 ? 0 : mod_ - r_); }

PAdicValue padic_dist(const PAdicInt& a, const PAdicInt& b) { return (a - b).value(); }

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<PAdicInt> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw Error(ErrorKind::Precondition, "polynomial needs at least one coefficient");
  p_ = coeffs_.front().prime();
  n_ = coeffs_.front().precision();
  for (const auto& c : coeffs_)
    if (c.prime() != p_ || c.precision() != n_)
      throw Error(ErrorKind::DomainMismatch, "coefficients from different p-adic rings");
  while (coeffs_.size() > 1 && coeffs_.back().residue() == 0) coeffs_.pop_back();
  if (degree() > kMaxPolynomialDegree) throw Error(ErrorKind::BoundExceeded, "polynomial degree above 16");
}

Polynomial Polynomial::from_integers(const std::vector<std::int64_t>& coefficients, std::uint64_t p, unsigned N) {
  std::vector<PAdicInt> cs;
  for (auto c : coefficients) cs.emplace_back(p, N, c);
  return Polynomial(std::move(cs));
}

PAdicInt Polynomial::operator()(const PAdicInt& x) const {
  PAdicInt acc = PAdicInt::from_residue(p_, n_, 0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<PAdicInt> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    out.push_back(coeffs_[i] * PAdicInt(p_, n_, static_cast<std::int64_t>(i)));
  if (out.empty()) out.push_back(PAdicInt::from_residue(p_, n_, 0));
  return Polynomial(std::move(out));
}

Polynomial Polynomial::at_precision(unsigned N) const {
  std::vector<PAdicInt> out;
  for (const auto& c : coeffs_) out.push_back(c.at_precision(N));
  return Polynomial(std::move(out));
}

PAdicInt newton_map(const Polynomial& P, const PAdicInt& x) {
  const PAdicInt dx = P.derivative()(x);
  if (!dx.is_unit())
    throw Error(ErrorKind::NonUnitDerivative, "P'(" + std::to_string(x.residue()) + ") is divisible by p");
  return x - P(x) * dx.inverse();
}

std::vector<std::uint64_t> residue_roots(const std::vector<std::int64_t>& coefficients, std::uint64_t p) {
  const auto P = Polynomial::from_integers(coefficients, p, 1);
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < p; ++r)
    if (P(PAdicInt::from_residue(p, 1, r)).residue() == 0) out.push_back(r);
  return out;
}

HenselResult hensel_lift(const std::vector<std::int64_t>& coefficients, std::int64_t x0, std::uint64_t p,
                         unsigned N) {
  padic_modulus(p, N);
  const auto P1 = Polynomial::from_integers(coefficients, p, 1);
  const PAdicInt start(p, 1, x0);
  if (P1(start).residue() != 0) {
    const auto roots = residue_roots(coefficients, p);
    throw Error(ErrorKind::Precondition, "P(" + std::to_string(x0) + ") is not 0 mod " + std::to_string(p) +
                                             (roots.empty() ? " (P has no root mod p)" : ""));
  }
  if (!P1.derivative()(start).is_unit())
    throw Error(ErrorKind::NonUnitDerivative, "P'(x0) is divisible by p");

  HenselResult result{start, {{1, start.residue()}}};
  unsigned k = 1;
  while (k < N) {
    k = std::min(2 * k, N);
    const auto Pk = Polynomial::from_integers(coefficients, p, k);
    result.root = newton_map(Pk, result.root.at_precision(k));
    result.trace.push_back({k, result.root.residue()});
  }
  const auto PN = Polynomial::from_integers(coefficients, p, N);
  if (PN(result.root).residue() != 0)
    throw Error(ErrorKind::InternalAssertion, "lifted root does not annihilate P mod p^N");
  return result;
}

// ---------------------------------------------------------------------------

std::vector<PAdicInt> ideal_points(std::uint64_t p, unsigned N) {
  const std::uint64_t m = padic_modulus(p, N);
  std::vector<PAdicInt> out;
  for (std::uint64_t r = 0; r < m; r += p) out.push_back(PAdicInt::from_residue(p, N, r));
  return out;
}

ConditionReport check_fptcbs_hypotheses(const PAdicMap& f, std::uint64_t p, unsigned N) {
  const std::uint64_t m = padic_modulus(p, N);
  if (m > kMaxExhaustivePAdicModulus)
    throw Error(ErrorKind::BoundExceeded, "exhaustive check limited to p^N ≤ 10^4");
  const auto pts = ideal_points(p, N);
  std::vector<PAdicInt> img;
  img.reserve(pts.size());
  for (const auto& x : pts) {
    PAdicInt y = f(x);
    if (y.prime() != p || y.precision() != N) throw Error(ErrorKind::DomainMismatch, "map changes the p-adic ring");
    if (!y.in_ideal())
      throw Error(ErrorKind::DomainMismatch, "f(" + std::to_string(x.residue()) + ") leaves the ideal pZ/p^N");
    img.push_back(y);
  }
  auto index = [&](const PAdicInt& x) { return x.residue() / p; };

  ConditionReport report;
  auto& contracting = report.add("contracting");
  for (std::size_t i = 0; i < pts.size() && contracting.holds; ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (padic_dist(img[i], img[j]) > padic_dist(pts[i], pts[j])) {
        contracting.holds = false;
        contracting.points = {pts[i].residue(), pts[j].residue()};
        contracting.detail = "d(fx,fy) > d(x,y)";
        break;
      }

  auto& cbs = report.add("FPTcbs");
  std::size_t max_j = 0;
  for (std::size_t i = 0; i < pts.size() && cbs.holds; ++i) {
    if (img[i] == pts[i]) continue;
    const PAdicValue bound = padic_dist(pts[i], img[i]).squared();
    std::vector<bool> seen(pts.size(), false);
    std::optional<std::size_t> found;
    std::size_t j = 1;
    for (std::size_t y = index(img[i]); !seen[y]; y = index(img[y]), ++j) {
      seen[y] = true;
      if (padic_dist(pts[y], img[y]) <= bound) {
        found = j;
        break;
      }
    }
    if (!found) {
      cbs.holds = false;
      cbs.points = {pts[i].residue()};
      cbs.detail = "no j with v(f^j x - f^{j+1} x) ≤ v(x - fx)^2";
    } else {
      max_j = std::max(max_j, *found);
    }
  }
  if (cbs.holds) cbs.detail = "largest j needed: " + std::to_string(max_j);
  return report;
}

PAdicMap shifted_newton_map(const Polynomial& P, std::int64_t shift) {
  return [P, shift](const PAdicInt& y) {
    const PAdicInt s(y.prime(), y.precision(), shift);
    return newton_map(P, y + s) - s;
  };
}

bool is_distinguished_nest(std::span<const PAdicBall> nest, std::uint64_t p, unsigned N) {
  for (std::size_t i = 0; i < nest.size(); ++i) {
    const auto& b = nest[i];
    for (const auto* e : {&b.x, &b.y}) {
      if (e->prime() != p || e->precision() != N) throw Error(ErrorKind::DomainMismatch, "ball from another ring");
      if (!e->in_ideal()) throw Error(ErrorKind::Precondition, "ball generator outside the ideal");
    }
    if (i > 0 && !b.subset_of(nest[i - 1])) throw Error(ErrorKind::Precondition, "balls do not form a nest");
  }
  for (const auto& b : nest) {
    const PAdicValue target = padic_dist(b.x, b.y).squared();
    const bool ok = std::any_of(nest.begin(), nest.end(),
                                [&](const PAdicBall& c) { return padic_dist(c.x, c.y) <= target; });
    if (!ok) return false;
  }
  return true;
}

std::vector<PAdicBall> orbit_nest(const PAdicMap& f, const PAdicInt& x0) {
  std::vector<PAdicBall> out;
  std::vector<std::uint64_t> seen;
  PAdicInt x = x0;
  while (std::find(seen.begin(), seen.end(), x.residue()) == seen.end()) {
    seen.push_back(x.residue());
    PAdicInt fx = f(x);
    out.push_back({x, fx});
    x = fx;
  }
  return out;
}

std::vector<PAdicInt> nest_intersection(std::span<const PAdicBall> nest, std::uint64_t p, unsigned N) {
  std::vector<PAdicInt> out;
  for (const auto& z : ideal_points(p, N))
    if (std::all_of(nest.begin(), nest.end(), [&](const PAdicBall& b) { return b.contains(z); })) out.push_back(z);
  return out;
}

ConditionReport check_cbs_equivalence(std::uint64_t p, unsigned N, const std::vector<std::vector<PAdicBall>>& nests) {
  if (nests.empty()) throw Error(ErrorKind::Precondition, "no sample nests given");
  ConditionReport report;
  for (std::size_t i = 0; i < nests.size(); ++i) {
    auto& c = report.add("nest " + std::to_string(i));
    if (nests[i].empty()) throw Error(ErrorKind::Precondition, "a nest must be nonempty");
    const bool distinguished = is_distinguished_nest(nests[i], p, N);
    const auto meet = nest_intersection(nests[i], p, N);
    c.holds = !meet.empty();
    c.detail = std::string(distinguished ? "distinguished" : "not distinguished") + "; intersection has " +
               std::to_string(meet.size()) + " residue(s) at precision " + std::to_string(N);
    if (!meet.empty()) c.points = {meet.front().residue()};
  }
  return report;
}

UltrametricSpace padic_ultrametric(std::span<const PAdicInt> points) {
  if (points.empty()) throw Error(ErrorKind::Precondition, "no points");
  const std::uint64_t p = points.front().prime();
  const unsigned N = points.front().precision();
  std::vector<std::string> values{"0"};
  for (unsigned k = 1; k <= N; ++k) values.push_back("|" + std::to_string(p) + "|^" + std::to_string(N - k));
  const std::size_t n = points.size();
  std::vector<std::string> names;
  std::vector<ValueId> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(points[i].residue()));
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = N - padic_dist(points[i], points[j]).exponent;
  }
  return UltrametricSpace(std::move(names), ValuePoset::chain(std::move(values)), std::move(dist),
                          UltrametricSpace::Validation::Trusted);
}

UltrametricSpace padic_ultrametric_all(std::uint64_t p, unsigned N) {
  const std::uint64_t m = padic_modulus(p, N);
  std::vector<PAdicInt> pts;
  for (std::uint64_t r = 0; r < m; ++r) pts.push_back(PAdicInt::from_residue(p, N, r));
  return padic_ultrametric(pts);
}

UltrametricSpace padic_ultrametric_ideal(std::uint64_t p, unsigned N) {
  const auto pts = ideal_points(p, N);
  return padic_ultrametric(pts);
}

std::vector<PointId> residue_index(std::span<const PAdicInt> points) {
  if (points.empty()) return {};
  std::vector<PointId> table(points.front().modulus(), static_cast<PointId>(-1));
  for (PointId i = 0; i < points.size(); ++i) table[points[i].residue()] = i;
  return table;
}

}  // namespace ballfix

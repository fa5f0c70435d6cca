#include "ballfix/banach.hpp"

#include <algorithm>
#include <sstream>

namespace ballfix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational power(const Rational& c, std::size_t k) {
  Rational out = 1;
  for (std::size_t i = 0; i < k; ++i) out *= c;
  return out;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  const std::string text = trim(raw);
  auto bad = [&]() { return Error(ErrorKind::Parse, "not a rational number: '" + raw + "'"); };
  if (text.empty()) throw bad();
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    if (text.find('/') != std::string::npos) throw bad();
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t scale = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw bad();
    Rational q;
    if (q.get_num().set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) throw bad();
    mpz_class den = 1;
    for (std::size_t i = 0; i < scale; ++i) den *= 10;
    q.get_den() = den;
    q.canonicalize();
    return q;
  }
  for (char c : text)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) throw bad();
  Rational q;
  if (q.set_str(text[0] == '+' ? text.substr(1) : text, 10) != 0) throw bad();
  if (q.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + raw + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

RationalPoint parse_point(const std::string& text) {
  RationalPoint p;
  for (const auto& item : split(text, ',')) p.coords.push_back(parse_rational(item));
  if (p.coords.empty()) throw Error(ErrorKind::Parse, "empty point");
  return p;
}

std::string to_string(const RationalPoint& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) out += ", ";
    out += p.coords[i].get_str();
  }
  return out + ")";
}

Rational max_dist(const RationalPoint& a, const RationalPoint& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DomainMismatch, "points of different dimension");
  Rational m = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, abs_q(a.coords[i] - b.coords[i]));
  return m;
}

void ContractionSpec::validate() const {
  if (!f) throw Error(ErrorKind::Precondition, "contraction has no map");
  if (C <= 0 || C >= 1) throw Error(ErrorKind::Precondition, "contraction constant must satisfy 0 < C < 1");
}

MetricBall orbit_ball(const ContractionSpec& spec, const RationalPoint& x) {
  spec.validate();
  return MetricBall{x, max_dist(x, spec.f(x)) / (1 - spec.C)};
}

std::size_t strict_drop_index(const Rational& C) {
  if (C <= 0 || C >= 1) throw Error(ErrorKind::Precondition, "contraction constant must satisfy 0 < C < 1");
  const Rational half(1, 2);
  Rational ci = C;
  for (std::size_t i = 1;; ++i, ci *= C)
    if (ci / (1 - C) < half) return i;
}

BanachOrbitReport verify_banach_sc(const ContractionSpec& spec, const RationalPoint& x0, std::size_t L) {
  spec.validate();
  if (L < 2) throw Error(ErrorKind::Precondition, "orbit length must be at least 2");
  const Rational& C = spec.C;
  BanachOrbitReport out;
  auto& xs = out.orbit;
  xs.push_back(x0);
  for (std::size_t k = 0; k <= L; ++k) xs.push_back(spec.f(xs.back()));
  std::vector<Rational> step(L + 1), radius(L + 1);
  for (std::size_t k = 0; k <= L; ++k) {
    step[k] = max_dist(xs[k], xs[k + 1]);
    radius[k] = step[k] / (1 - C);
  }

  for (std::size_t k = 0; k + 1 <= L; ++k)
    if (step[k + 1] > C * step[k])
      throw Error(ErrorKind::SpecViolation, "orbit ratio exceeds C at step " + std::to_string(k) + ": d = " +
                                                step[k + 1].get_str() + " > C·" + step[k].get_str());

  auto& report = out.checks;
  auto fail = [](Check& c, std::vector<PointId> pts, std::string why) {
    if (!c.holds) return;
    c.holds = false;
    c.points = std::move(pts);
    c.detail = std::move(why);
  };

  auto& contracting = report.add("contracting");
  const Rational factor = spec.mode == ContractionSpec::Mode::Strict ? C : Rational(1);
  for (std::size_t i = 0; i <= L; ++i)
    for (std::size_t j = i + 1; j <= L; ++j)
      if (max_dist(xs[i + 1], xs[j + 1]) > factor * max_dist(xs[i], xs[j]))
        fail(contracting, {i, j}, "d(f x_i, f x_j) exceeds the allowed bound");

  auto& sc1 = report.add("SC1");
  for (std::size_t k = 0; k <= L; ++k)
    if (max_dist(xs[k], xs[k]) > radius[k]) fail(sc1, {k}, "x not in B_x");

  auto& nesting = report.add("SC2-nesting");
  for (std::size_t k = 0; k < L; ++k)
    if (step[k] + radius[k + 1] > radius[k]) fail(nesting, {k}, "d(x,fx) + r(B_fx) > r(B_x)");

  out.drop_index = strict_drop_index(C);
  const std::size_t i = out.drop_index;
  auto& drop = report.add("SC2-drop");
  drop.detail = "i = " + std::to_string(i);
  for (std::size_t k = 0; k + i <= L; ++k) {
    if (step[k] == 0) continue;
    const MetricBall b{xs[k + i], radius[k + i]};
    if (b.contains(xs[k]) && b.contains(xs[k + 1])) fail(drop, {k}, "x and fx both lie in B_{f^i x}");
    if (!MetricBall{xs[k], radius[k]}.contains(b)) fail(drop, {k}, "B_{f^i x} not inside B_x");
  }

  auto& geometric = report.add("geometric");
  for (std::size_t k = 0; k <= L; ++k)
    for (std::size_t j = k; j <= L + 1; ++j)
      if (max_dist(xs[k], xs[j]) > radius[k]) fail(geometric, {k, j}, "d(x, f^i x) > d(x,fx)/(1-C)");

  // z = x_L lies in every orbit ball of the prefix, as in an f-nest
  auto& estimate = report.add("SC3-estimate");
  const RationalPoint& z = xs[L];
  const Rational dz = step[L];
  for (std::size_t k = 0; k < L; ++k)
    for (std::size_t ii = 1; k + ii <= L; ++ii) {
      const Rational bound = power(C, ii - 1) * (C + 1) / (1 - C) * step[k];
      const Rational via = max_dist(z, xs[k + ii]) + max_dist(z, xs[k + ii - 1]);
      if (!(dz <= via && via <= radius[k + ii] + radius[k + ii - 1] && radius[k + ii] + radius[k + ii - 1] <= bound))
        fail(estimate, {k, ii}, "d(z,fz) estimate chain broken");
    }

  auto& sc3 = report.add("SC3");
  const MetricBall bz{z, radius[L]};
  for (std::size_t k = 0; k <= L; ++k)
    if (!MetricBall{xs[k], radius[k]}.contains(bz)) fail(sc3, {k}, "B_z not inside B_x");
  return out;
}

BanachResult solve_banach(const ContractionSpec& spec, const RationalPoint& x0, const Rational& eps,
                          std::size_t budget) {
  spec.validate();
  if (eps <= 0) throw Error(ErrorKind::Precondition, "tolerance must be positive");
  const Rational tol = eps * (1 - spec.C);
  RationalPoint x = x0;
  for (std::size_t it = 0; it <= budget; ++it) {
    RationalPoint fx = spec.f(x);
    const Rational d = max_dist(x, fx);
    if (d <= tol) return BanachResult{x, MetricBall{x, d / (1 - spec.C)}, it};
    x = std::move(fx);
  }
  throw Error(ErrorKind::BoundExceeded, "iteration budget exhausted before reaching the tolerance");
}

UniquenessVerdict check_uniqueness(const ContractionSpec& spec, const RationalPoint& a, const RationalPoint& b) {
  spec.validate();
  if (spec.mode != ContractionSpec::Mode::Strict)
    throw Error(ErrorKind::Precondition, "uniqueness needs a strictly contracting map");
  const RationalPoint fa = spec.f(a), fb = spec.f(b);
  if (!(fa == a)) throw Error(ErrorKind::NotAFixedPoint, to_string(a) + " is not fixed");
  if (!(fb == b)) throw Error(ErrorKind::NotAFixedPoint, to_string(b) + " is not fixed");
  UniquenessVerdict v;
  if (a == b) {
    v.detail = "candidates coincide";
    return v;
  }
  v.unique = false;
  v.contradiction = std::make_pair(max_dist(fa, fb), max_dist(a, b));
  v.detail = "distinct fixed points would need d(fx,fy) <= C d(x,y) < d(x,y) = d(fx,fy); claim impossible";
  return v;
}

// ---------------------------------------------------------------------------

RationalPoint AffineMap::operator()(const RationalPoint& v) const {
  if (v.dim() != dim()) throw Error(ErrorKind::DomainMismatch, "point dimension does not match the map");
  RationalPoint out;
  out.coords.resize(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Rational s = b[i];
    for (std::size_t j = 0; j < dim(); ++j) s += A[i][j] * v.coords[j];
    out.coords[i] = s;
  }
  return out;
}

Rational AffineMap::max_row_sum() const {
  Rational m = 0;
  for (const auto& row : A) {
    Rational s = 0;
    for (const auto& a : row) s += abs_q(a);
    m = std::max(m, s);
  }
  return m;
}

AffineMap parse_affine(const std::string& text) {
  AffineMap m;
  for (const auto& row : split(text, ';')) {
    const auto items = split(row, ',');
    if (items.size() < 2) throw Error(ErrorKind::Parse, "affine row needs matrix entries and a translation");
    std::vector<Rational> r;
    for (std::size_t j = 0; j + 1 < items.size(); ++j) r.push_back(parse_rational(items[j]));
    m.A.push_back(std::move(r));
    m.b.push_back(parse_rational(items.back()));
  }
  for (const auto& r : m.A)
    if (r.size() != m.b.size()) throw Error(ErrorKind::Parse, "affine matrix must be square");
  if (m.b.empty()) throw Error(ErrorKind::Parse, "empty affine map");
  return m;
}

ContractionSpec affine_spec(const AffineMap& map, const Rational& C, ContractionSpec::Mode mode) {
  ContractionSpec spec{[map](const RationalPoint& v) { return map(v); }, C, mode};
  spec.validate();
  if (map.max_row_sum() > C)
    throw Error(ErrorKind::SpecViolation, "max row sum " + map.max_row_sum().get_str() + " exceeds C");
  return spec;
}

AffineMap random_affine_contraction(std::size_t dim, const Rational& C, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 7), bnum(-20, 20);
  AffineMap m;
  m.A.assign(dim, std::vector<Rational>(dim));
  m.b.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m.A[i][j] = Rational(num(rng), den(rng));
      m.A[i][j].canonicalize();
    }
    m.b[i] = Rational(bnum(rng), den(rng));
    m.b[i].canonicalize();
  }
  const Rational s = m.max_row_sum();
  if (s > C)
    for (auto& row : m.A)
      for (auto& a : row) a = a * C / s;
  return m;
}

}  // namespace ballfix

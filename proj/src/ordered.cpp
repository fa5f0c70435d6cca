#include "ballfix/ordered.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace ballfix {

namespace {

Rational floor_of(const Rational& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(out);
}

Rational ceil_of(const Rational& q) {
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(out);
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

bool is_dyadic(const Rational& q) {
  const mpz_class& d = q.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Balls

void OrderBall::validate() const {
  if (radius.sign() < 0) throw Error(ErrorKind::Precondition, "order ball radius " + to_string(radius) + " is negative");
}

bool OrderBall::contains(const HahnSeries& z) const { return (center - z).abs() <= radius; }

bool OrderBall::subset_of(const OrderBall& o) const { return (center - o.center).abs() + radius <= o.radius; }

bool order_ball_contains(const OrderBall& ball, const HahnSeries& z) { return ball.contains(z); }

bool UltrametricBall::contains(const HahnSeries& z) const {
  return natural_valuation(x - z) <= natural_valuation(x - y);
}

bool UltrametricBall::subset_of(const UltrametricBall& o) const {
  return o.contains(x) && natural_valuation(x - y) <= natural_valuation(o.x - o.y);
}

bool UltrametricBall::subset_of(const OrderBall& o) const {
  if (x == y) return o.contains(x);
  const HahnSeries slack = o.radius - (x - o.center).abs();
  return slack.sign() > 0 && natural_valuation(slack) > natural_valuation(x - y);
}

bool subset_of(const OrderBall& inner, const UltrametricBall& outer) {
  return outer.contains(inner.center) && natural_valuation(inner.radius) <= outer.radius();
}

// ---------------------------------------------------------------------------
// Orbit solver

namespace {

using OrbitCheck = std::function<void(const HahnSeries& d1, const HahnSeries& d2, std::size_t step)>;

std::optional<HahnSeries> aitken(const OagStep& s, int T) {
  const HahnSeries den = s.f2x - s.fx * Rational(2) + s.x;
  if (den.is_zero()) return std::nullopt;
  const HahnSeries delta = s.fx - s.x;
  return s.x - divide(delta * delta, den, T).quotient;
}

OagReport run_oag(const SeriesMap& f, const Rational& ratio, const OrbitCheck& check, const HahnSeries& x0, int T,
                  std::size_t budget, const OagChooser& chooser) {
  if (budget == 0) throw Error(ErrorKind::Precondition, "budget must be positive");
  OagReport rep;
  rep.C = (ratio + 1) / 2;
  rep.truncation = T;
  const Rational scale = 1 / (1 - rep.C);
  auto ball_of = [&](const HahnSeries& x, const HahnSeries& fx) { return OrderBall{x, (x - fx).abs() * scale}; };
  auto inside_nest = [&](const OrderBall& b) {
    return std::all_of(rep.nest.begin(), rep.nest.end(), [&](const OrderBall& n) { return b.subset_of(n); });
  };

  HahnSeries x = x0;
  for (std::size_t step = 0; step < budget; ++step) {
    const HahnSeries fx = f(x);
    const HahnSeries d1 = (x - fx).abs();
    rep.valuation_trace.push_back(natural_valuation(d1));
    const OrderBall bx = ball_of(x, fx);
    if (!rep.nest.empty() && !bx.subset_of(rep.nest.back())) {
      rep.outcome = Outcome::HypothesisViolated;
      rep.violated = "SC2";
      rep.witness = x;
      return rep;
    }
    rep.nest.push_back(bx);
    rep.iterations = step;
    if (d1.is_zero()) {
      rep.outcome = Outcome::FixedPointFound;
      rep.witness = x;
      return rep;
    }
    if (*d1.leading_exponent() > T) {
      rep.outcome = Outcome::CertificateReached;
      rep.witness = x;
      return rep;
    }
    const HahnSeries f2x = f(fx);
    const HahnSeries d2 = (fx - f2x).abs();
    check(d1, d2, step);
    rep.iterations = step + 1;

    const OagStep s{x, fx, f2x};
    std::optional<HahnSeries> z = chooser ? chooser(rep.nest, s) : aitken(s, T);
    if (z) {
      const bool in_nest = std::all_of(rep.nest.begin(), rep.nest.end(), [&](const OrderBall& b) { return b.contains(*z); });
      if (!in_nest) {
        if (chooser)
          throw Error(ErrorKind::ContractViolation, "chooser returned " + to_string(*z) + " outside the nest");
        z.reset();
      }
    }
    if (z) {
      const OrderBall bz = ball_of(*z, f(*z));
      if (!inside_nest(bz)) {
        if (chooser) {
          rep.outcome = Outcome::HypothesisViolated;
          rep.violated = "SC3";
          rep.witness = *z;
          return rep;
        }
        z.reset();
      }
    }
    if (z) {
      x = *z;
      ++rep.restarts;
    } else {
      x = fx;
    }
  }
  rep.outcome = Outcome::BudgetExhausted;
  rep.witness = x;
  return rep;
}

}  // namespace

OagReport solve_oag(const SeriesMap& f, long m, long n, const HahnSeries& x0, int T, std::size_t budget,
                    const OagChooser& chooser) {
  if (m <= 0 || n <= 0 || m >= n)
    throw Error(ErrorKind::Precondition, "ratio m/n needs 0 < m < n, got " + std::to_string(m) + "/" + std::to_string(n));
  auto check = [m, n](const HahnSeries& d1, const HahnSeries& d2, std::size_t step) {
    if (d2 > d1)
      throw Error(ErrorKind::SpecViolation, "step " + std::to_string(step) + ": |fx - f2x| = " + to_string(d2) +
                                                " exceeds |x - fx| = " + to_string(d1));
    if (d2 * Rational(n) > d1 * Rational(m))
      throw Error(ErrorKind::SpecViolation, "step " + std::to_string(step) + ": " + std::to_string(n) + "|fx - f2x| > " +
                                                std::to_string(m) + "|x - fx| with |x - fx| = " + to_string(d1));
  };
  Rational ratio(m, n);
  ratio.canonicalize();
  return run_oag(f, ratio, check, x0, T, budget, chooser);
}

Rational rational_ratio_above(const HahnSeries& C) {
  if (C.sign() <= 0 || C >= HahnSeries::constant(1))
    throw Error(ErrorKind::Precondition, "C = " + to_string(C) + " is not strictly between 0 and 1");
  const Rational c0 = C.coefficient(0);
  if (c0 >= 1) throw Error(ErrorKind::Precondition, "1 - C = " + to_string(HahnSeries::constant(1) - C) + " is infinitesimal");
  Rational out = (c0 + 1) / 2;
  out.canonicalize();
  return out;
}

OagReport solve_oag_field(const SeriesMap& f, const HahnSeries& C, const HahnSeries& x0, int T, std::size_t budget) {
  const Rational ratio = rational_ratio_above(C);
  auto check = [&C](const HahnSeries& d1, const HahnSeries& d2, std::size_t step) {
    if (d2 > C * d1)
      throw Error(ErrorKind::SpecViolation, "step " + std::to_string(step) + ": |fx - f2x| = " + to_string(d2) +
                                                " exceeds C|x - fx| = " + to_string(C * d1));
  };
  return run_oag(f, ratio, check, x0, T, budget, {});
}

SeriesMap affine_series_map(const HahnSeries& a, const HahnSeries& b) {
  return [a, b](const HahnSeries& x) { return a * x + b; };
}

// ---------------------------------------------------------------------------
// Archimedean desk groups

std::string to_string(DeskGroup g) {
  switch (g) {
    case DeskGroup::Integers: return "integers";
    case DeskGroup::Dyadic: return "dyadic";
    case DeskGroup::Rationals: return "rationals";
  }
  return "?";
}

DeskGroup parse_desk_group(const std::string& text) {
  if (text == "integers" || text == "Z") return DeskGroup::Integers;
  if (text == "dyadic" || text == "dyadic-rationals") return DeskGroup::Dyadic;
  if (text == "rationals" || text == "Q") return DeskGroup::Rationals;
  throw Error(ErrorKind::Parse, "unknown group '" + text + "'");
}

std::string to_string(AscoVerdict v) {
  switch (v) {
    case AscoVerdict::MinimalBall: return "minimal-ball";
    case AscoVerdict::Nonempty: return "nonempty";
    case AscoVerdict::EmptySoFar: return "empty-so-far";
  }
  return "?";
}

bool RationalBall::subset_of(const RationalBall& o) const { return abs(center - o.center) + radius <= o.radius; }

Rational simplest_rational(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw Error(ErrorKind::Precondition, "empty interval");
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_rational(-hi, -lo);
  const Rational c = ceil_of(lo);
  if (c <= hi) return c;
  const Rational n = floor_of(lo);
  Rational out = n + 1 / simplest_rational(1 / (hi - n), 1 / (lo - n));
  out.canonicalize();
  return out;
}

Rational simplest_dyadic(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw Error(ErrorKind::Precondition, "empty interval");
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_dyadic(-hi, -lo);
  Rational step = 1;
  for (int k = 0; k < 4096; ++k, step /= 2) {
    const Rational m = ceil_of(lo / step);
    if (m * step <= hi) {
      Rational out = m * step;
      out.canonicalize();
      return out;
    }
  }
  throw Error(ErrorKind::Precondition, "no dyadic rational of small denominator in [" + to_string(lo) + ", " +
                                           to_string(hi) + "]");
}

AscoReport check_asco(DeskGroup group, const RationalNestStream& stream, std::size_t budget) {
  AscoReport rep;
  rep.group = group;
  std::optional<RationalBall> prev;
  std::vector<Rational> simplest;
  std::size_t min_level = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    std::optional<RationalBall> b = stream(i);
    if (!b) break;
    if (b->radius < 0) throw Error(ErrorKind::Precondition, "level " + std::to_string(i) + " has negative radius");
    if (group == DeskGroup::Integers) {
      if (!is_integer(b->center))
        throw Error(ErrorKind::Precondition, "level " + std::to_string(i) + " center is not an integer");
      b->radius = floor_of(b->radius);
    } else if (group == DeskGroup::Dyadic && !(is_dyadic(b->center) && is_dyadic(b->radius))) {
      throw Error(ErrorKind::Precondition, "level " + std::to_string(i) + " is not a dyadic ball");
    }
    if (prev && !b->subset_of(*prev))
      throw Error(ErrorKind::Precondition, "level " + std::to_string(i) + " is not inside level " + std::to_string(i - 1));
    if (prev && b->radius < prev->radius) min_level = i;
    prev = b;
    rep.levels_read = i + 1;
    rep.level = i;
    rep.lo = b->lo();
    rep.hi = b->hi();
    if (group == DeskGroup::Integers) continue;
    if (b->radius == 0) {
      rep.verdict = AscoVerdict::Nonempty;
      rep.witness = b->center;
      rep.detail = "level " + std::to_string(i) + " is the single point " + to_string(b->center);
      return rep;
    }
    simplest.push_back(group == DeskGroup::Dyadic ? simplest_dyadic(b->lo(), b->hi()) : simplest_rational(b->lo(), b->hi()));
  }
  if (!prev) throw Error(ErrorKind::Precondition, "the nest stream is empty");

  if (group == DeskGroup::Integers) {
    rep.verdict = AscoVerdict::MinimalBall;
    rep.level = min_level;
    rep.witness = prev->center;
    rep.detail = "smallest ball is level " + std::to_string(min_level) + " with " +
                 to_string(Rational(2 * prev->radius + 1)) + " points";
    return rep;
  }
  const std::size_t k = simplest.size();
  const bool stable = k >= 8 && std::all_of(simplest.begin() + k / 2, simplest.end(),
                                            [&](const Rational& q) { return q == simplest.back(); });
  if (stable) {
    rep.verdict = AscoVerdict::Nonempty;
    rep.witness = simplest.back();
    rep.detail = to_string(simplest.back()) + " lies in every level from " + std::to_string(k / 2) + " on";
  } else {
    rep.verdict = AscoVerdict::EmptySoFar;
    rep.detail = "no point survives " + std::to_string(k) + " levels; last interval has width " + to_string(Rational(rep.hi - rep.lo));
  }
  return rep;
}

RationalNestStream bisection_nest(std::function<bool(const Rational&)> below, Rational lo, Rational hi) {
  auto levels = std::make_shared<std::vector<std::pair<Rational, Rational>>>();
  levels->emplace_back(std::move(lo), std::move(hi));
  return [levels, below = std::move(below)](std::size_t i) -> std::optional<RationalBall> {
    while (levels->size() <= i) {
      auto [a, b] = levels->back();
      Rational mid = (a + b) / 2;
      mid.canonicalize();
      if (below(mid))
        levels->emplace_back(mid, b);
      else
        levels->emplace_back(a, mid);
    }
    const auto& [a, b] = (*levels)[i];
    Rational c = (a + b) / 2, r = (b - a) / 2;
    c.canonicalize();
    r.canonicalize();
    return RationalBall{c, r};
  };
}

RationalNestStream sqrt2_nest() {
  return bisection_nest([](const Rational& q) { return q * q < 2; }, 1, 2);
}

// ---------------------------------------------------------------------------
// Ultrametric nests to order nests

HahnSeries geometric_partial_sum(int k) {
  std::vector<HahnSeries::Term> terms;
  for (int i = 0; i < k; ++i) terms.emplace_back(i, 1);
  return HahnSeries(std::move(terms));
}

ScoscuReport scoscu_transfer(const std::vector<std::pair<HahnSeries, HahnSeries>>& pairs, int T,
                             const std::vector<HahnSeries>& extra_probes) {
  if (pairs.empty()) throw Error(ErrorKind::Precondition, "the nest is empty");
  std::vector<UltrametricBall> um;
  for (const auto& [x, y] : pairs) um.push_back(UltrametricBall{x, y});
  for (std::size_t mu = 0; mu + 1 < um.size(); ++mu) {
    if (!(um[mu + 1].radius() < um[mu].radius()))
      throw Error(ErrorKind::Precondition, "descent is not strict at " + std::to_string(mu + 1) + ": " +
                                               to_string(um[mu + 1].radius()) + " vs " + to_string(um[mu].radius()));
    if (!um[mu + 1].subset_of(um[mu]))
      throw Error(ErrorKind::Precondition, "ball " + std::to_string(mu + 1) + " is not inside ball " + std::to_string(mu));
  }

  ScoscuReport rep;
  rep.truncation = T;
  const std::size_t k = um.size();
  for (std::size_t mu = 0; mu + 1 < k; ++mu)
    rep.order_nest.push_back(OrderBall{pairs[mu + 1].first, (pairs[mu].first - pairs[mu].second).abs()});

  Check& c1 = rep.checks.add("B^mu in Bu");
  Check& c2 = rep.checks.add("Bu next in B^mu");
  Check& c3 = rep.checks.add("order nest");
  Check& c4 = rep.checks.add("intersection");
  if (k == 1) {
    for (Check* c : {&c1, &c2, &c3, &c4}) c->detail = "single ball";
    return rep;
  }
  auto fail = [](Check& c, std::size_t mu, const std::string& what) {
    if (!c.holds) return;
    c.holds = false;
    c.detail = "mu = " + std::to_string(mu) + ": " + what;
  };
  for (std::size_t mu = 0; mu + 1 < k; ++mu) {
    if (!subset_of(rep.order_nest[mu], um[mu])) fail(c1, mu, "order ball leaves the ultrametric ball");
    if (!um[mu + 1].subset_of(rep.order_nest[mu])) fail(c2, mu, "next ultrametric ball leaves the order ball");
    if (mu + 2 < k && !rep.order_nest[mu + 1].subset_of(rep.order_nest[mu])) fail(c3, mu, "order balls not nested");
  }

  std::vector<HahnSeries> probes = extra_probes;
  for (const auto& [x, y] : pairs) {
    probes.push_back(x);
    probes.push_back(y);
  }
  probes.push_back(geometric_partial_sum(T));
  const HahnSeries& last = pairs.back().first;
  const HahnSeries gap = pairs.back().first - pairs.back().second;
  const int e = gap.is_zero() ? T : *gap.leading_exponent();
  for (int j = std::max(0, e - 3); j <= e + 3; ++j)
    for (const Rational& c : {Rational(1), Rational(-1), Rational(1, 3), Rational(7)})
      probes.push_back(last + HahnSeries::monomial(c, j));
  probes.push_back(last + gap);
  probes.push_back(last - gap * Rational(5));
  probes.push_back(last + (pairs.front().first - pairs.front().second));

  for (const HahnSeries& z : probes) {
    const bool in_u = std::all_of(um.begin(), um.end(), [&](const UltrametricBall& b) { return b.contains(z); });
    const bool in_o =
        std::all_of(rep.order_nest.begin(), rep.order_nest.end(), [&](const OrderBall& b) { return b.contains(z); });
    const bool in_prefix = std::all_of(um.begin(), um.end() - 1, [&](const UltrametricBall& b) { return b.contains(z); });
    ++rep.probes;
    if ((in_u && !in_o) || (in_o && !in_prefix)) {
      fail(c4, k - 1, "probe " + to_string(z) + " separates the intersections");
      c4.points.clear();
    }
  }
  if (c4.holds) c4.detail = std::to_string(rep.probes) + " probes, truncation " + std::to_string(T);
  return rep;
}

std::vector<std::pair<HahnSeries, HahnSeries>> random_ultrametric_nest(std::size_t depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> nonzero(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  auto noise = [&](int from, int count) {
    std::vector<HahnSeries::Term> terms;
    for (int j = 0; j < count; ++j) terms.emplace_back(from + j, Rational(coeff(rng), nonzero(rng)));
    return HahnSeries(std::move(terms));
  };
  auto lead = [&](int e) { return HahnSeries::monomial(Rational(coin(rng) ? nonzero(rng) : -nonzero(rng), nonzero(rng)), e); };

  std::vector<std::pair<HahnSeries, HahnSeries>> out;
  int e = coin(rng);
  HahnSeries x = noise(0, 3);
  out.emplace_back(x, x + lead(e) + noise(e + 1, 2));
  for (std::size_t mu = 1; mu < depth; ++mu) {
    x = x + noise(e, 3);
    e += 1 + coin(rng);
    out.emplace_back(x, x + lead(e) + noise(e + 1, 2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hybrid ball spaces

std::string to_string(CoefficientField c) {
  switch (c) {
    case CoefficientField::Rationals: return "Q";
    case CoefficientField::Dyadic: return "dyadic";
    case CoefficientField::RealsSymbolic: return "R-symbolic";
  }
  return "?";
}

CoefficientField parse_coefficient_field(const std::string& text) {
  if (text == "Q" || text == "rationals") return CoefficientField::Rationals;
  if (text == "dyadic") return CoefficientField::Dyadic;
  if (text == "R-symbolic" || text == "R") return CoefficientField::RealsSymbolic;
  throw Error(ErrorKind::Parse, "unknown coefficient field '" + text + "'");
}

OrderBall as_order_ball(const RationalBall& b) {
  return OrderBall{HahnSeries::constant(b.center), HahnSeries::constant(b.radius)};
}

bool hybrid_contains(const HybridBall& b, const HahnSeries& z) {
  if (const auto* u = std::get_if<UltrametricBall>(&b)) return u->contains(z);
  return as_order_ball(std::get<RationalBall>(b)).contains(z);
}

bool hybrid_subset(const HybridBall& inner, const HybridBall& outer) {
  const auto* ui = std::get_if<UltrametricBall>(&inner);
  const auto* uo = std::get_if<UltrametricBall>(&outer);
  if (ui && uo) return ui->subset_of(*uo);
  if (ui) return ui->subset_of(as_order_ball(std::get<RationalBall>(outer)));
  const OrderBall oi = as_order_ball(std::get<RationalBall>(inner));
  if (uo) return subset_of(oi, *uo);
  return oi.subset_of(as_order_ball(std::get<RationalBall>(outer)));
}

std::string to_string(const HybridBall& b) {
  if (const auto* u = std::get_if<UltrametricBall>(&b)) return "Bu(" + to_string(u->x) + ", " + to_string(u->y) + ")";
  const auto& o = std::get<RationalBall>(b);
  return "Bo(" + to_string(o.center) + "; " + to_string(o.radius) + ")";
}

namespace {

void validate_hybrid_ball(CoefficientField field, const HybridBall& b, std::size_t i) {
  const auto* o = std::get_if<RationalBall>(&b);
  if (!o) return;
  if (o->radius <= 0) throw Error(ErrorKind::Precondition, "ball " + std::to_string(i) + " has nonpositive radius");
  if (field == CoefficientField::Dyadic && !(is_dyadic(o->center) && is_dyadic(o->radius)))
    throw Error(ErrorKind::Precondition, "ball " + std::to_string(i) + " is not dyadic");
}

void validate_hybrid_link(const HybridBall& inner, const HybridBall& outer, std::size_t i) {
  if (!hybrid_subset(inner, outer))
    throw Error(ErrorKind::Precondition, "ball " + std::to_string(i) + " " + to_string(inner) + " is not inside " + to_string(outer));
}

HybridReport rational_tail_verdict(CoefficientField field, const std::vector<HybridBall>& prefix,
                                   const RationalNestStream& tail, std::size_t budget, int T) {
  HybridReport rep;
  rep.cofinal_class = "rational-order";
  rep.truncation = T;
  if (field == CoefficientField::RealsSymbolic) {
    rep.nonempty = true;
    rep.detail = "residue nest converges in R, which is spherically complete";
    return rep;
  }
  AscoReport a = check_asco(field == CoefficientField::Dyadic ? DeskGroup::Dyadic : DeskGroup::Rationals, tail, budget);
  if (a.verdict == AscoVerdict::Nonempty) {
    const HahnSeries w = HahnSeries::constant(*a.witness);
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (!hybrid_contains(prefix[i], w))
        throw Error(ErrorKind::InternalAssertion, "witness " + to_string(w) + " misses ball " + std::to_string(i));
    rep.nonempty = true;
    rep.witness = w;
    rep.detail = "residue nest stabilizes at " + to_string(*a.witness);
  } else {
    rep.detail = "residue field " + to_string(field) + ": " + a.detail;
  }
  rep.residue = std::move(a);
  return rep;
}

}  // namespace

HybridReport check_hybrid(CoefficientField field, const std::vector<HybridBall>& nest, std::size_t budget, int T) {
  if (nest.empty()) throw Error(ErrorKind::Precondition, "the nest is empty");
  for (std::size_t i = 0; i < nest.size(); ++i) {
    validate_hybrid_ball(field, nest[i], i);
    if (i > 0) validate_hybrid_link(nest[i], nest[i - 1], i);
  }
  const std::size_t cls = nest.back().index();
  std::vector<std::size_t> cofinal;
  for (std::size_t i = 0; i < nest.size(); ++i)
    if (nest[i].index() == cls) cofinal.push_back(i);

  if (const auto* u = std::get_if<UltrametricBall>(&nest.back())) {
    HybridReport rep;
    rep.cofinal_class = "ultrametric";
    rep.cofinal_indices = std::move(cofinal);
    rep.truncation = T;
    HahnSeries w = u->x.truncated(T);
    if (!u->contains(w)) w = u->x;
    for (std::size_t i = 0; i < nest.size(); ++i)
      if (!hybrid_contains(nest[i], w))
        throw Error(ErrorKind::InternalAssertion, "witness " + to_string(w) + " misses ball " + std::to_string(i));
    rep.nonempty = true;
    rep.witness = w;
    rep.detail = "nonempty up to truncation " + std::to_string(T);
    return rep;
  }

  std::vector<RationalBall> tail;
  for (std::size_t i : cofinal) tail.push_back(std::get<RationalBall>(nest[i]));
  auto stream = [tail](std::size_t i) -> std::optional<RationalBall> {
    if (i < tail.size()) return tail[i];
    return std::nullopt;
  };
  HybridReport rep = rational_tail_verdict(field, nest, stream, budget, T);
  rep.cofinal_indices = std::move(cofinal);
  return rep;
}

HybridReport check_hybrid(CoefficientField field, const std::vector<HybridBall>& prefix, const RationalNestStream& tail,
                          std::size_t budget, int T) {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    validate_hybrid_ball(field, prefix[i], i);
    if (i > 0) validate_hybrid_link(prefix[i], prefix[i - 1], i);
  }
  auto read = std::make_shared<std::size_t>(0);
  auto checked = [&, read](std::size_t i) -> std::optional<RationalBall> {
    std::optional<RationalBall> b = tail(i);
    if (!b) return b;
    const std::size_t idx = prefix.size() + i;
    validate_hybrid_ball(field, *b, idx);
    if (i == 0 && !prefix.empty()) validate_hybrid_link(*b, prefix.back(), idx);
    *read = std::max(*read, i + 1);
    return b;
  };
  HybridReport rep = rational_tail_verdict(field, prefix, checked, budget, T);
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::holds_alternative<RationalBall>(prefix[i])) rep.cofinal_indices.push_back(i);
  for (std::size_t i = 0; i < *read; ++i) rep.cofinal_indices.push_back(prefix.size() + i);
  return rep;
}

}  // namespace ballfix

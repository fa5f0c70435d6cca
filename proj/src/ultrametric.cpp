#include "ballfix/ultrametric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ballfix {

namespace {

std::string pair_text(const UltrametricSpace& s, PointId a, PointId b) {
  return "(" + s.name(a) + "," + s.name(b) + ")";
}

}  // namespace

UltrametricSpace::UltrametricSpace(std::vector<std::string> names, ValuePoset values, std::vector<ValueId> dist,
                                   Validation validation)
    : names_(std::move(names)), values_(std::move(values)), dist_(std::move(dist)) {
  const std::size_t n = names_.size();
  if (n == 0) throw Error(ErrorKind::Precondition, "ultrametric space needs at least one point");
  if (dist_.size() != n * n) throw Error(ErrorKind::Precondition, "distance table must be n×n");
  for (ValueId v : dist_)
    if (v >= values_.size()) throw Error(ErrorKind::Precondition, "distance outside the value set");
  if (validation == Validation::Full) {
    const auto report = check_axioms();
    for (const auto& c : report.checks)
      if (!c.holds) throw Error(ErrorKind::Precondition, c.tag + " fails: " + c.detail);
  }
}

UltrametricSpace UltrametricSpace::unnamed(std::size_t n, ValuePoset values, std::vector<ValueId> dist,
                                           Validation validation) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return UltrametricSpace(std::move(names), std::move(values), std::move(dist), validation);
}

PointId UltrametricSpace::point(std::string_view name) const {
  for (PointId i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorKind::DomainMismatch, "unknown point '" + std::string(name) + "'");
}

ConditionReport UltrametricSpace::check_axioms() const {
  const std::size_t n = size();
  const std::size_t m = values_.size();
  const ValueId zero = values_.bottom_id();
  ConditionReport report;

  auto& u1 = report.add("U1");
  for (PointId x = 0; x < n && u1.holds; ++x)
    for (PointId y = 0; y < n; ++y)
      if ((d(x, y) == zero) != (x == y)) {
        u1.holds = false;
        u1.points = {x, y};
        u1.detail = "d" + pair_text(*this, x, y) + (x == y ? " is not 0" : " is 0 for distinct points");
        break;
      }

  auto& u3 = report.add("U3");
  for (PointId x = 0; x < n && u3.holds; ++x)
    for (PointId y = x + 1; y < n; ++y)
      if (d(x, y) != d(y, x)) {
        u3.holds = false;
        u3.points = {x, y};
        u3.detail = "d" + pair_text(*this, x, y) + " differs from d" + pair_text(*this, y, x);
        break;
      }

  // ok[(a*m+b)*m+c]: c ≤ γ for every γ with a ≤ γ and b ≤ γ
  std::vector<char> ok(m * m * m, 1);
  for (ValueId a = 0; a < m; ++a)
    for (ValueId b = 0; b < m; ++b)
      for (ValueId g = 0; g < m; ++g)
        if (values_.leq_id(a, g) && values_.leq_id(b, g))
          for (ValueId c = 0; c < m; ++c)
            if (!values_.leq_id(c, g)) ok[(a * m + b) * m + c] = 0;

  auto& u2 = report.add("U2");
  for (PointId x = 0; x < n && u2.holds; ++x)
    for (PointId y = 0; y < n && u2.holds; ++y)
      for (PointId z = 0; z < n; ++z)
        if (!ok[(d(x, y) * m + d(y, z)) * m + d(x, z)]) {
          u2.holds = false;
          u2.points = {x, y, z};
          u2.detail = "d" + pair_text(*this, x, z) + " exceeds a common bound of d" + pair_text(*this, x, y) +
                      " and d" + pair_text(*this, y, z);
          break;
        }

  auto& ut = report.add("UT");
  if (!values_.is_total()) {
    ut.evaluated = false;
    ut.detail = "values not totally ordered; U2 applies";
  } else {
    for (PointId x = 0; x < n && ut.holds; ++x)
      for (PointId y = 0; y < n && ut.holds; ++y)
        for (PointId z = 0; z < n; ++z) {
          const ValueId mx = leq(d(x, y), d(y, z)) ? d(y, z) : d(x, y);
          if (!leq(d(x, z), mx)) {
            ut.holds = false;
            ut.points = {x, y, z};
            ut.detail = "d" + pair_text(*this, x, z) + " > max of the other two sides";
            break;
          }
        }
  }
  return report;
}

PointSet UltrametricSpace::ball(PointId x, PointId y) const {
  const std::size_t n = size();
  if (x >= n || y >= n) throw Error(ErrorKind::DomainMismatch, "point outside the space");
  PointSet s(n);
  const ValueId r = d(x, y);
  for (PointId z = 0; z < n; ++z)
    if (leq(d(x, z), r)) s.set(z);
  return s;
}

BallSpace UltrametricSpace::ball_space() const {
  std::vector<PointSet> balls;
  for (PointId x = 0; x < size(); ++x)
    for (PointId y = 0; y < size(); ++y) balls.push_back(ball(x, y));
  return BallSpace(names_, std::move(balls));
}

bool um_ball_contains(const UltrametricSpace& space, PointId x, PointId y, PointId z) {
  if (x >= space.size() || y >= space.size() || z >= space.size())
    throw Error(ErrorKind::DomainMismatch, "point outside the space");
  return space.leq(space.d(x, z), space.d(x, y));
}

bool um_ball_leq(const UltrametricSpace& space, PointId t, PointId z, PointId x, PointId y) {
  const bool law = um_ball_contains(space, x, y, t) && space.leq(space.d(t, z), space.d(x, y));
  const bool extensional = space.ball(t, z).is_subset_of(space.ball(x, y));
  if (law != extensional)
    throw Error(ErrorKind::InternalAssertion, "ball inclusion law disagrees with set inclusion for B" +
                                                  pair_text(space, t, z) + ", B" + pair_text(space, x, y));
  return law;
}

ContractingVerdict is_contracting(const UltrametricSpace& space, const SelfMap& f) {
  if (f.size() != space.size()) throw Error(ErrorKind::DomainMismatch, "map is not total on the space");
  ContractingVerdict v;
  for (PointId x = 0; x < space.size(); ++x)
    for (PointId y = 0; y < space.size(); ++y)
      if (!space.leq(space.d(f(x), f(y)), space.d(x, y))) {
        v.holds = false;
        v.witness = std::make_pair(x, y);
        return v;
      }
  return v;
}

BallAssignment sufpt_assignment(const UltrametricSpace& space, const SelfMap& f) {
  if (f.size() != space.size()) throw Error(ErrorKind::DomainMismatch, "map is not total on the space");
  BallAssignment a;
  for (PointId x = 0; x < space.size(); ++x) a.balls.push_back(space.ball(x, f(x)));
  return a;
}

ConditionReport check_sufpt_hypotheses(const UltrametricSpace& space, const SelfMap& f) {
  if (f.size() != space.size()) throw Error(ErrorKind::DomainMismatch, "map is not total on the space");
  const std::size_t n = space.size();
  ConditionReport report;

  auto& scoo = report.add("scoo");
  for (PointId x = 0; x < n && scoo.holds; ++x) {
    if (f(x) == x) continue;
    const ValueId base = space.d(x, f(x));
    std::vector<bool> seen(n, false);
    bool dropped = false;
    for (PointId y = f(x); !seen[y]; y = f(y)) {
      seen[y] = true;
      if (space.lt(space.d(y, f(y)), base)) {
        dropped = true;
        break;
      }
    }
    if (!dropped) {
      scoo.holds = false;
      scoo.points = {x};
      scoo.detail = "orbit distances never drop strictly below d(x,fx)";
    }
  }

  auto& sufptc = report.add("SUFPTc");
  for (PointId x = 0; x < n && sufptc.holds; ++x) {
    const PointId fx = f(x);
    for (PointId z = 0; z < n; ++z)
      if (space.leq(space.d(z, fx), space.d(fx, f(fx))) && !space.leq(space.d(z, f(z)), space.d(x, fx))) {
        sufptc.holds = false;
        sufptc.points = {x, z};
        sufptc.detail = "d(z,fx) ≤ d(fx,f²x) but d(z,fz) ≰ d(x,fx)";
        break;
      }
  }
  return report;
}

FixedPointReport solve_sufpt(const UltrametricSpace& space, const SelfMap& f, std::size_t budget,
                             PointId start) {
  const auto assign = sufpt_assignment(space, f);
  auto report = solve_gfpt2(
      space.size(), [&](PointId x) { return f(x); }, [&](PointId x) { return assign[x]; }, start, budget);
  if (report.found() && !f.is_fixed(*report.witness))
    throw Error(ErrorKind::InternalAssertion, "orbit solver returned a non-fixed point");
  return report;
}

ConditionReport check_csco(const UltrametricSpace& space, const SelfMap& f) {
  ConditionReport report;
  const auto contracting = is_contracting(space, f);
  auto& pre = report.add("contracting");
  auto& zin = report.add("zinBx");
  auto& fbx = report.add("fBx");
  auto& bfx = report.add("Bfx");
  auto& sc3 = report.add("SC3");
  if (!contracting.holds) {
    pre.holds = false;
    pre.points = {contracting.witness->first, contracting.witness->second};
    pre.detail = "precondition failed: d(fx,fy) ≰ d(x,y)";
    for (Check* c : {&zin, &fbx, &bfx, &sc3}) {
      c->holds = false;
      c->evaluated = false;
      c->detail = "not evaluated: map is not contracting";
    }
    return report;
  }
  const auto assign = sufpt_assignment(space, f);
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId z : members(assign[x]))
      if (zin.holds && !assign[z].is_subset_of(assign[x])) {
        zin.holds = false;
        zin.points = {x, z};
      }
    if (fbx.holds && !f.image(assign[x]).is_subset_of(assign[x])) {
      fbx.holds = false;
      fbx.points = {x};
    }
    if (bfx.holds && !assign[f(x)].is_subset_of(assign[x])) {
      bfx.holds = false;
      bfx.points = {x};
    }
  }
  const auto sc = check_sc_axioms(f, assign);
  sc3 = sc.at("SC3");
  return report;
}

ConditionReport check_attractor_conditions(const SelfMap& f, const BallAssignment& assign,
                                           std::span<const PointId> phi, const BallAssignment& target_assign,
                                           PointId z_prime) {
  const std::size_t n = f.size();
  if (assign.size() != n || phi.size() != n || target_assign.size() != n)
    throw Error(ErrorKind::DomainMismatch, "attractor data not defined on every point");
  ConditionReport report;
  auto& at1 = report.add("AT1");
  auto& at2 = report.add("AT2");
  for (PointId x = 0; x < n; ++x) {
    const PointSet& target = target_assign[x];
    if (z_prime >= target.size()) throw Error(ErrorKind::DomainMismatch, "z′ outside the codomain");
    bool ok = target.test(z_prime);
    for (PointId w : members(assign[x])) ok = ok && target.test(phi[w]);
    if (!ok && at1.holds) {
      at1.holds = false;
      at1.points = {x};
    }
    if (phi[x] == z_prime || !at2.holds) continue;
    std::vector<bool> seen(n, false);
    bool dropped = false;
    for (PointId y = f(x); !seen[y] && !dropped; y = f(y)) {
      seen[y] = true;
      dropped = proper_subset(target_assign[y], target);
    }
    if (!dropped) {
      at2.holds = false;
      at2.points = {x};
    }
  }
  return report;
}

AttractorReport solve_attractor(const UltrametricSpace& domain, const UltrametricSpace& codomain,
                                std::span<const PointId> phi, PointId z_prime, const AttractorChooser& chooser,
                                PointId start, std::size_t budget) {
  const std::size_t n = domain.size();
  if (phi.size() != n) throw Error(ErrorKind::DomainMismatch, "φ is not total on the domain");
  for (PointId v : phi)
    if (v >= codomain.size()) throw Error(ErrorKind::DomainMismatch, "φ leaves the codomain");
  if (z_prime >= codomain.size()) throw Error(ErrorKind::DomainMismatch, "z′ outside the codomain");

  AttractorReport out;
  std::map<PointId, PointId> f;
  auto dist_to_target = [&](PointId x) { return codomain.d(phi[x], z_prime); };

  auto fx_of = [&](PointId x) -> PointId {
    if (auto it = f.find(x); it != f.end()) return it->second;
    if (phi[x] == z_prime) return f[x] = x;
    const PointId y = chooser(x);
    if (y >= n) throw Error(ErrorKind::ContractViolation, "chooser returned a point outside the domain");
    const ValueId dx = dist_to_target(x);
    if (!codomain.lt(dist_to_target(y), dx))
      throw Error(ErrorKind::ContractViolation, "UAT1 fails for x=" + domain.name(x) + ", y=" + domain.name(y));
    for (PointId w : members(domain.ball(x, y)))
      if (!codomain.leq(codomain.d(phi[x], phi[w]), dx))
        throw Error(ErrorKind::ContractViolation,
                    "UAT2 fails for x=" + domain.name(x) + ", y=" + domain.name(y) + " at " + domain.name(w));
    const ValueId dxy = domain.d(x, y);
    for (PointId t = 0; t < n; ++t) {
      const ValueId dt = dist_to_target(t);
      if (!codomain.lt(dx, dt)) continue;
      bool inside = true;
      for (PointId w : members(domain.ball(t, x)))
        if (!codomain.leq(codomain.d(phi[t], phi[w]), dt)) {
          inside = false;
          break;
        }
      if (inside && !domain.values().comparable_id(domain.d(t, x), dxy))
        throw Error(ErrorKind::ContractViolation, "UAT3 fails for x=" + domain.name(x) + ", y=" + domain.name(y) +
                                                      " against t=" + domain.name(t));
    }
    ++out.validated_steps;
    return f[x] = y;
  };
  auto ball_of = [&](PointId x) { return domain.ball(x, fx_of(x)); };

  out.run = solve_gfpt2(n, fx_of, ball_of, start, budget);
  if (out.run.found()) {
    const PointId w = *out.run.witness;
    if (phi[w] != z_prime)
      throw Error(ErrorKind::InternalAssertion, "fixed point of the constructed map is not a preimage of z′");
    out.preimage = w;
  }

  auto& at1 = out.attractor_checks.add("AT1");
  auto& at2 = out.attractor_checks.add("AT2");
  for (const auto& [x, y] : f) {
    const ValueId dx = dist_to_target(x);
    for (PointId w : members(domain.ball(x, y)))
      if (!codomain.leq(codomain.d(phi[x], phi[w]), dx) && at1.holds) {
        at1.holds = false;
        at1.points = {x, w};
      }
    if (phi[x] != z_prime && !codomain.lt(dist_to_target(y), dx) && at2.holds) {
      at2.holds = false;
      at2.points = {x};
    }
  }
  return out;
}

ConditionReport check_uat3_prime(const UltrametricSpace& domain, const UltrametricSpace& codomain,
                                 const SelfMap& f, std::span<const PointId> phi, PointId z_prime) {
  const std::size_t n = domain.size();
  if (f.size() != n || phi.size() != n) throw Error(ErrorKind::DomainMismatch, "map not total on the domain");
  ConditionReport report;
  auto& strict = report.add("UAT3'");
  auto& weak = report.add("UAT3'-comparable");
  for (PointId x = 0; x < n; ++x)
    for (PointId z = 0; z < n; ++z) {
      if (!codomain.lt(codomain.d(phi[z], z_prime), codomain.d(phi[x], z_prime))) continue;
      if (!domain.ball(z, f(z)).intersects(domain.ball(x, f(x)))) continue;
      const ValueId dz = domain.d(z, f(z));
      const ValueId dx = domain.d(x, f(x));
      if (strict.holds && !domain.lt(dz, dx)) {
        strict.holds = false;
        strict.points = {z, x};
        strict.detail = "overlapping balls with d(z,fz) not below d(x,fx)";
      }
      if (weak.holds && !domain.values().comparable_id(dz, dx)) {
        weak.holds = false;
        weak.points = {z, x};
        weak.detail = "overlapping balls with incomparable radii";
      }
    }
  return report;
}

// ---------------------------------------------------------------------------

UltrametricSpace random_chain_ultrametric(std::size_t n, std::size_t levels, std::mt19937_64& rng) {
  if (n == 0 || levels == 0) throw Error(ErrorKind::Precondition, "need at least one point and one level");
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<ValueId> dist(n * n, 0);
  std::size_t clusters = n;
  for (std::size_t level = 1; level <= levels; ++level) {
    std::vector<std::size_t> relabel(n);
    const std::size_t target =
        level == levels ? 1 : std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(clusters, 1))(rng);
    std::uniform_int_distribution<std::size_t> pick(0, target - 1);
    for (auto& r : relabel) r = pick(rng);
    for (auto& l : label) l = relabel[l];
    std::set<std::size_t> distinct(label.begin(), label.end());
    clusters = distinct.size();
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y)
        if (x != y && dist[x * n + y] == 0 && label[x] == label[y]) dist[x * n + y] = level;
  }
  return UltrametricSpace::unnamed(n, ValuePoset::chain(levels + 1), std::move(dist));
}

UltrametricSpace product_ultrametric(const UltrametricSpace& a, const UltrametricSpace& b) {
  const std::size_t na = a.size(), nb = b.size(), mb = b.values().size();
  std::vector<std::string> names;
  for (PointId i = 0; i < na; ++i)
    for (PointId j = 0; j < nb; ++j) names.push_back("(" + a.name(i) + "," + b.name(j) + ")");
  const std::size_t n = na * nb;
  std::vector<ValueId> dist(n * n);
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y)
      dist[x * n + y] = a.d(x / nb, y / nb) * mb + b.d(x % nb, y % nb);
  return UltrametricSpace(std::move(names), product_poset(a.values(), b.values()), std::move(dist));
}

UltrametricSpace subspace(const UltrametricSpace& space, std::span<const PointId> points) {
  const std::size_t k = points.size();
  std::vector<std::string> names;
  std::vector<ValueId> dist(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back(space.name(points[i]));
    for (std::size_t j = 0; j < k; ++j) dist[i * k + j] = space.d(points[i], points[j]);
  }
  return UltrametricSpace(std::move(names), space.values(), std::move(dist));
}

std::optional<UltrametricSpace> random_poset_ultrametric(std::size_t n, const ValuePoset& values,
                                                         std::mt19937_64& rng, std::size_t attempts) {
  if (values.size() < 2 && n > 1) return std::nullopt;
  std::vector<ValueId> nonzero;
  for (ValueId v = 0; v < values.size(); ++v)
    if (v != values.bottom_id()) nonzero.push_back(v);
  std::uniform_int_distribution<std::size_t> pick(0, nonzero.empty() ? 0 : nonzero.size() - 1);
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    std::vector<ValueId> dist(n * n, values.bottom_id());
    for (PointId x = 0; x < n; ++x)
      for (PointId y = x + 1; y < n; ++y) dist[x * n + y] = dist[y * n + x] = nonzero[pick(rng)];
    UltrametricSpace candidate =
        UltrametricSpace::unnamed(n, values, std::move(dist), UltrametricSpace::Validation::Trusted);
    if (candidate.check_axioms().passed()) return candidate;
  }
  return std::nullopt;
}

}  // namespace ballfix

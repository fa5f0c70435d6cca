#include "ballfix/ball_space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ballfix {

namespace {

void require_budget(std::size_t budget) {
  if (budget == 0) throw Error(ErrorKind::Precondition, "budget must be positive");
}

std::vector<PointSet> contracting_balls(const BallSpace& space, const SelfMap& f) {
  std::vector<PointSet> out;
  for (const auto& b : space.balls())
    if (is_f_contracting_set(f, b)) out.push_back(b);
  return out;
}

std::vector<PointSet> sorted_by_reverse_inclusion(std::vector<PointSet> balls) {
  std::sort(balls.begin(), balls.end(), [](const PointSet& a, const PointSet& b) {
    if (a.count() != b.count()) return a.count() > b.count();
    return tie_break_less(a, b);
  });
  balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
  return balls;
}

PointSet intersect_all(std::span<const PointSet> balls, std::size_t universe) {
  PointSet acc = full_set(universe);
  for (const auto& b : balls) acc &= b;
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// BallSpace

BallSpace::BallSpace(std::vector<std::string> point_names, std::vector<PointSet> balls)
    : names_(std::move(point_names)) {
  const std::size_t n = names_.size();
  if (n == 0) throw Error(ErrorKind::InvalidBall, "ball space needs at least one point");
  {
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != n) throw Error(ErrorKind::InvalidBall, "duplicate point names");
  }
  if (balls.empty()) throw Error(ErrorKind::InvalidBall, "ball collection is empty");
  for (auto& b : balls) {
    if (b.size() != n) throw Error(ErrorKind::InvalidBall, "ball has wrong universe size");
    if (b.none()) throw Error(ErrorKind::InvalidBall, "balls must be nonempty");
    if (std::find(balls_.begin(), balls_.end(), b) == balls_.end()) balls_.push_back(std::move(b));
  }
}

BallSpace BallSpace::unnamed(std::size_t points, std::vector<PointSet> balls) {
  std::vector<std::string> names;
  names.reserve(points);
  for (std::size_t i = 0; i < points; ++i) names.push_back(std::to_string(i));
  return BallSpace(std::move(names), std::move(balls));
}

BallSpace BallSpace::from_names(std::vector<std::string> point_names,
                                const std::vector<std::vector<std::string>>& balls) {
  std::map<std::string, PointId> index;
  for (PointId i = 0; i < point_names.size(); ++i) index[point_names[i]] = i;
  std::vector<PointSet> sets;
  for (const auto& ball : balls) {
    PointSet s(point_names.size());
    for (const auto& name : ball) {
      auto it = index.find(name);
      if (it == index.end()) throw Error(ErrorKind::InvalidBall, "unknown point '" + name + "' in ball");
      s.set(it->second);
    }
    sets.push_back(std::move(s));
  }
  return BallSpace(std::move(point_names), std::move(sets));
}

std::optional<std::size_t> BallSpace::find_ball(const PointSet& s) const {
  for (std::size_t i = 0; i < balls_.size(); ++i)
    if (balls_[i] == s) return i;
  return std::nullopt;
}

PointId BallSpace::point(std::string_view name) const {
  for (PointId i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorKind::InvalidBall, "unknown point '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// SelfMap, BallAssignment, Nest

SelfMap::SelfMap(std::vector<PointId> table) : table_(std::move(table)) {
  for (PointId v : table_)
    if (v >= table_.size()) throw Error(ErrorKind::DomainMismatch, "self-map image outside ground set");
}

SelfMap SelfMap::identity(std::size_t n) {
  std::vector<PointId> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = i;
  return SelfMap(std::move(t));
}

SelfMap SelfMap::from_names(const BallSpace& space,
                            const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::optional<PointId>> t(space.size());
  for (const auto& [from, to] : pairs) t[space.point(from)] = space.point(to);
  std::vector<PointId> table;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i]) throw Error(ErrorKind::DomainMismatch, "map undefined at '" + space.name(i) + "'");
    table.push_back(*t[i]);
  }
  return SelfMap(std::move(table));
}

PointSet SelfMap::image(const PointSet& s) const {
  PointSet out(s.size());
  for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.set(table_.at(i));
  return out;
}

std::vector<PointId> SelfMap::fixed_points() const {
  std::vector<PointId> out;
  for (PointId i = 0; i < table_.size(); ++i)
    if (table_[i] == i) out.push_back(i);
  return out;
}

void SelfMap::check_against(const BallSpace& space) const {
  if (table_.size() != space.size())
    throw Error(ErrorKind::DomainMismatch, "self-map is not total on the ground set");
}

void BallAssignment::check_against(const BallSpace& space) const {
  if (balls.size() != space.size())
    throw Error(ErrorKind::InvalidAssignment, "assignment not defined on every point");
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (!space.is_ball(balls[i]))
      throw Error(ErrorKind::InvalidAssignment,
                  "B_" + space.name(i) + " = " + format_set(balls[i], space.names()) + " is not a ball");
}

Nest::Nest(std::vector<PointSet> chain, std::string provenance)
    : chain_(std::move(chain)), provenance_(std::move(provenance)) {
  if (chain_.empty()) throw Error(ErrorKind::Precondition, "a nest must be nonempty");
  for (std::size_t i = 1; i < chain_.size(); ++i) {
    if (chain_[i].size() != chain_[0].size())
      throw Error(ErrorKind::Precondition, "nest balls live in different spaces");
    if (!chain_[i].is_subset_of(chain_[i - 1]))
      throw Error(ErrorKind::Precondition, "nest is not sorted by reverse inclusion");
  }
}

PointSet Nest::intersection() const { return intersect_all(chain_, chain_.front().size()); }

// ---------------------------------------------------------------------------
// f-contracting balls

bool is_f_contracting_set(const SelfMap& f, const PointSet& b) {
  if (b.count() == 1) {
    const PointId x = b.find_first();
    if (f(x) == x) return true;
  }
  return proper_subset(f.image(b), b);
}

bool is_f_contracting(const BallSpace& space, const SelfMap& f, const PointSet& b) {
  if (!space.is_ball(b)) throw Error(ErrorKind::InvalidBall, format_set(b, space.names()) + " is not a ball");
  return is_f_contracting_set(f, b);
}

std::vector<std::vector<PointSet>> maximal_chains(std::span<const PointSet> input) {
  const auto balls = sorted_by_reverse_inclusion({input.begin(), input.end()});
  const std::size_t k = balls.size();
  // covers[i]: balls j ⊊ i with nothing strictly between
  std::vector<std::vector<std::size_t>> covers(k);
  std::vector<bool> has_parent(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!proper_subset(balls[j], balls[i])) continue;
      bool direct = true;
      for (std::size_t m = 0; m < k && direct; ++m)
        if (proper_subset(balls[j], balls[m]) && proper_subset(balls[m], balls[i])) direct = false;
      if (direct) {
        covers[i].push_back(j);
        has_parent[j] = true;
      }
    }
  }
  std::vector<std::vector<PointSet>> out;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    path.push_back(i);
    if (covers[i].empty()) {
      std::vector<PointSet> chain;
      for (auto idx : path) chain.push_back(balls[idx]);
      out.push_back(std::move(chain));
    } else {
      for (auto j : covers[i]) walk(j);
    }
    path.pop_back();
  };
  for (std::size_t i = 0; i < k; ++i)
    if (!has_parent[i]) walk(i);
  return out;
}

ConditionReport check_c_conditions(const BallSpace& space, const SelfMap& f) {
  f.check_against(space);
  ConditionReport report;
  const auto contracting = contracting_balls(space, f);
  const auto names = space.names();

  auto& c1 = report.add("C1");
  if (contracting.empty()) {
    c1.holds = false;
    c1.detail = "no f-contracting ball";
  }

  auto& c2 = report.add("C2");
  for (const auto& b : contracting) {
    const PointSet img = f.image(b);
    const bool ok = std::any_of(contracting.begin(), contracting.end(),
                                [&](const PointSet& c) { return c.is_subset_of(img); });
    if (!ok) {
      c2.holds = false;
      c2.ball = b;
      c2.detail = "f(" + format_set(b, names) + ") = " + format_set(img, names) +
                  " contains no f-contracting ball";
      break;
    }
  }

  // In a finite nest the intersection is the smallest member, so C3 reduces
  // to membership of that member; the chains are still enumerated so that the
  // reported counterexample is a genuine nest.
  auto& c3 = report.add("C3");
  for (const auto& chain : maximal_chains(contracting)) {
    const PointSet meet = intersect_all(chain, space.size());
    const bool ok = std::any_of(contracting.begin(), contracting.end(),
                                [&](const PointSet& c) { return c.is_subset_of(meet); });
    if (!ok) {
      c3.holds = false;
      c3.ball = meet;
      c3.detail = "nest intersection " + format_set(meet, names) + " contains no f-contracting ball";
      break;
    }
  }
  return report;
}

ConditionReport check_cu_conditions(const BallSpace& space, const SelfMap& f) {
  f.check_against(space);
  ConditionReport report;
  const auto contracting = contracting_balls(space, f);
  const auto names = space.names();

  auto& cu1 = report.add("CU1");
  const PointSet whole = space.full();
  if (!space.is_ball(whole)) {
    cu1.holds = false;
    cu1.detail = "X is not a ball";
  } else if (!is_f_contracting_set(f, whole)) {
    cu1.holds = false;
    cu1.ball = whole;
    cu1.detail = "X is not f-contracting";
  }

  auto& cu2 = report.add("CU2");
  for (const auto& b : contracting) {
    const PointSet img = f.image(b);
    if (!space.is_ball(img) || !is_f_contracting_set(f, img)) {
      cu2.holds = false;
      cu2.ball = b;
      cu2.detail = "f(" + format_set(b, names) + ") = " + format_set(img, names) +
                   (space.is_ball(img) ? " is not f-contracting" : " is not a ball");
      break;
    }
  }

  auto& cu3 = report.add("CU3");
  for (const auto& chain : maximal_chains(contracting)) {
    const PointSet meet = intersect_all(chain, space.size());
    if (meet.none() || !space.is_ball(meet) || !is_f_contracting_set(f, meet)) {
      cu3.holds = false;
      cu3.ball = meet;
      cu3.detail = "nest intersection " + format_set(meet, names) + " is not an f-contracting ball";
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Solvers

FixedPointReport solve_nfpt1(const BallSpace& space, const SelfMap& f, std::size_t budget) {
  require_budget(budget);
  f.check_against(space);
  FixedPointReport report;
  auto contracting = contracting_balls(space, f);
  std::sort(contracting.begin(), contracting.end(), tie_break_less);

  if (contracting.empty()) {
    report.outcome = Outcome::HypothesisViolated;
    report.violated = "C1";
    report.nest = Nest({space.full()}, "C1 failure");
    return report;
  }

  std::vector<PointSet> chain{contracting.front()};
  while (true) {
    const PointSet& current = chain.back();
    if (current.count() == 1 && f.is_fixed(current.find_first())) {
      report.outcome = Outcome::FixedPointFound;
      report.witness = current.find_first();
      break;
    }
    if (++report.iterations > budget) {
      report.outcome = Outcome::BudgetExhausted;
      break;
    }
    // current is f-contracting and not a fixed singleton, so f(current) ⊊ current
    const PointSet img = f.image(current);
    auto next = std::find_if(contracting.begin(), contracting.end(),
                             [&](const PointSet& c) { return c.is_subset_of(img); });
    if (next == contracting.end()) {
      report.outcome = Outcome::HypothesisViolated;
      report.violated = "C2";
      report.counterexample_ball = current;
      break;
    }
    chain.push_back(*next);
  }

  if (report.found()) {
    // complete to a maximal nest of f-contracting balls
    for (const auto& c : sorted_by_reverse_inclusion(contracting)) {
      const bool fits = std::all_of(chain.begin(), chain.end(),
                                    [&](const PointSet& b) { return comparable_by_inclusion(b, c); });
      if (fits && std::find(chain.begin(), chain.end(), c) == chain.end()) chain.push_back(c);
    }
  }
  report.nest = Nest(sorted_by_reverse_inclusion(std::move(chain)), "nfpt1");
  return report;
}

FixedPointReport solve_nfpt2(const BallSpace& space, const SelfMap& f, std::size_t budget) {
  require_budget(budget);
  f.check_against(space);
  FixedPointReport report;
  PointSet current = space.full();
  std::vector<PointSet> chain{current};

  auto violated = [&](std::string tag, const PointSet& ball) {
    report.outcome = Outcome::HypothesisViolated;
    report.violated = std::move(tag);
    report.counterexample_ball = ball;
    report.nest = Nest(chain, "nfpt2");
    return report;
  };

  if (!space.is_ball(current) || !is_f_contracting_set(f, current)) return violated("CU1", current);

  while (current.count() != 1) {
    if (report.iterations >= budget) {
      report.outcome = Outcome::BudgetExhausted;
      report.nest = Nest(chain, "nfpt2");
      return report;
    }
    ++report.iterations;
    PointSet next = f.image(current);
    if (!space.is_ball(next) || !is_f_contracting_set(f, next)) {
      report.stage = report.iterations;
      chain.push_back(next);
      report.nest = Nest(chain, "nfpt2");
      report.outcome = Outcome::HypothesisViolated;
      report.violated = "CU2";
      report.counterexample_ball = current;
      return report;
    }
    current = std::move(next);
    chain.push_back(current);
    report.stage = report.iterations;
  }

  const PointId x = current.find_first();
  if (!f.is_fixed(x))
    throw Error(ErrorKind::InternalAssertion, "terminal singleton of the image chain is not fixed");
  for (PointId y : f.fixed_points())
    if (y != x)
      throw Error(ErrorKind::InternalAssertion,
                  "second fixed point " + space.name(y) + " under the iterated-image hypotheses");
  report.outcome = Outcome::FixedPointFound;
  report.witness = x;
  report.nest = Nest(std::move(chain), "nfpt2");
  return report;
}

std::vector<FNest> enumerate_f_nests(const SelfMap& f, const BallAssignment& assign) {
  const std::size_t n = f.size();
  if (n > kMaxExhaustiveFNestPoints)
    throw Error(ErrorKind::BoundExceeded, "f-nest enumeration limited to " +
                                              std::to_string(kMaxExhaustiveFNestPoints) + " points");
  if (assign.size() != n) throw Error(ErrorKind::InvalidAssignment, "assignment not defined on every point");
  std::vector<FNest> out;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    bool closed = true;
    for (std::size_t x = 0; x < n && closed; ++x)
      if ((mask >> x & 1ul) && !(mask >> f(x) & 1ul)) closed = false;
    if (!closed) continue;
    std::vector<PointSet> balls;
    PointSet gens(n);
    for (std::size_t x = 0; x < n; ++x)
      if (mask >> x & 1ul) {
        gens.set(x);
        balls.push_back(assign[x]);
      }
    auto sorted = sorted_by_reverse_inclusion(std::move(balls));
    bool chain = true;
    for (std::size_t i = 1; i < sorted.size() && chain; ++i)
      chain = sorted[i].is_subset_of(sorted[i - 1]);
    if (chain) out.push_back(FNest{std::move(gens), Nest(std::move(sorted), "f-nest")});
  }
  return out;
}

ConditionReport check_sc_axioms(const BallSpace& space, const SelfMap& f, const BallAssignment& assign) {
  f.check_against(space);
  assign.check_against(space);
  return check_sc_axioms(f, assign);
}

ConditionReport check_sc_axioms(const SelfMap& f, const BallAssignment& assign) {
  const std::size_t n = f.size();
  if (assign.size() != n) throw Error(ErrorKind::InvalidAssignment, "assignment not defined on every point");
  for (const auto& b : assign.balls)
    if (b.size() != n) throw Error(ErrorKind::InvalidAssignment, "assigned ball has wrong universe size");

  ConditionReport report;
  auto& sc1 = report.add("SC1");
  for (PointId x = 0; x < n; ++x)
    if (!assign[x].test(x)) {
      sc1.holds = false;
      sc1.points = {x};
      sc1.detail = "x not in B_x";
      break;
    }

  auto& sc2 = report.add("SC2");
  bool nesting = true;
  for (PointId x = 0; x < n && sc2.holds; ++x) {
    if (!assign[f(x)].is_subset_of(assign[x])) {
      sc2.holds = false;
      nesting = false;
      sc2.points = {x};
      sc2.detail = "B_fx not contained in B_x";
      break;
    }
    if (f(x) == x) continue;
    // orbits of a finite map are eventually periodic: search until a repeat
    std::vector<bool> seen(n, false);
    bool dropped = false;
    for (PointId y = f(x); !seen[y]; y = f(y)) {
      seen[y] = true;
      if (proper_subset(assign[y], assign[x])) {
        dropped = true;
        break;
      }
    }
    if (!dropped) {
      sc2.holds = false;
      sc2.points = {x};
      sc2.detail = "no strict descent B_{f^i x} ⊊ B_x along the orbit";
    }
  }
  // the nesting half of SC2 must be known for the whole space before the
  // stable-orbit shortcut below can be used
  for (PointId x = 0; x < n && nesting; ++x)
    if (!assign[f(x)].is_subset_of(assign[x])) nesting = false;

  auto& sc3 = report.add("SC3");
  auto& meet = report.add("NEST");
  if (n <= kMaxExhaustiveFNestPoints) {
    for (const auto& fn : enumerate_f_nests(f, assign)) {
      const PointSet inter = fn.nest.intersection();
      bool some = false;
      for (PointId z : members(inter)) {
        const bool inside = assign[z].is_subset_of(inter);
        some = some || inside;
        if (!inside && sc3.holds) {
          sc3.holds = false;
          sc3.points = {z};
          sc3.ball = inter;
          sc3.detail = "z in the f-nest intersection with B_z not contained in it";
        }
      }
      if (!some && meet.holds) {
        meet.holds = false;
        meet.ball = inter;
        meet.points = members(fn.generators);
        meet.detail = "no z in the f-nest intersection with B_z inside it";
      }
    }
  } else if (nesting && sc1.holds) {
    // Under B_fx ⊆ B_x the intersections of f-nests are exactly the balls B_y
    // of points whose whole orbit keeps the same ball; y itself witnesses NEST.
    sc3.detail = meet.detail = "via stable-orbit characterisation";
    for (PointId y = 0; y < n && sc3.holds; ++y) {
      bool stable = true;
      std::vector<bool> seen(n, false);
      for (PointId w = f(y); !seen[w] && stable; w = f(w)) {
        seen[w] = true;
        stable = assign[w] == assign[y];
      }
      if (!stable) continue;
      for (PointId z : members(assign[y]))
        if (!assign[z].is_subset_of(assign[y])) {
          sc3.holds = false;
          sc3.points = {z};
          sc3.ball = assign[y];
          break;
        }
    }
  } else {
    sc3.holds = meet.holds = false;
    sc3.evaluated = meet.evaluated = false;
    sc3.detail = meet.detail = "space too large for exhaustive f-nest enumeration";
  }
  return report;
}

FixedPointReport solve_gfpt2(const BallSpace& space, const SelfMap& f, const BallAssignment& assign,
                             std::size_t budget, PointId start) {
  f.check_against(space);
  assign.check_against(space);
  return solve_gfpt2(
      space.size(), [&](PointId x) { return f(x); }, [&](PointId x) { return assign[x]; }, start, budget);
}

FixedPointReport solve_gfpt2(std::size_t n, const std::function<PointId(PointId)>& f,
                             const std::function<PointSet(PointId)>& ball_of, PointId start,
                             std::size_t budget) {
  require_budget(budget);
  if (start >= n) throw Error(ErrorKind::DomainMismatch, "start point outside the ground set");

  std::map<PointId, PointId> image_cache;
  std::map<PointId, PointSet> ball_cache;
  auto fx_of = [&](PointId x) {
    auto it = image_cache.find(x);
    if (it != image_cache.end()) return it->second;
    const PointId y = f(x);
    if (y >= n) throw Error(ErrorKind::DomainMismatch, "self-map image outside the ground set");
    image_cache.emplace(x, y);
    return y;
  };
  auto ball = [&](PointId x) -> const PointSet& {
    auto it = ball_cache.find(x);
    if (it == ball_cache.end()) {
      PointSet b = ball_of(x);
      if (b.size() != n) throw Error(ErrorKind::InvalidAssignment, "assigned ball has wrong universe size");
      it = ball_cache.emplace(x, std::move(b)).first;
    }
    return it->second;
  };

  FixedPointReport report;
  PointSet generators(n);
  std::vector<PointSet> chain;
  std::optional<PointSet> last_meet;

  auto finish = [&](Outcome outcome) {
    report.outcome = outcome;
    report.nest = Nest(sorted_by_reverse_inclusion(chain), "gfpt2 f-nest");
    return report;
  };
  auto violated = [&](std::string tag, std::optional<PointId> point, std::optional<PointSet> b) {
    report.violated = std::move(tag);
    report.counterexample_point = point;
    report.counterexample_ball = std::move(b);
    return finish(Outcome::HypothesisViolated);
  };

  PointId x = start;
  if (!ball(x).test(x)) return violated("SC1", x, ball(x));
  generators.set(x);
  chain.push_back(ball(x));

  while (true) {
    if (report.iterations >= budget) return finish(Outcome::BudgetExhausted);
    ++report.iterations;
    const PointId fx = fx_of(x);
    if (fx == x) {
      report.witness = x;
      return finish(Outcome::FixedPointFound);
    }
    if (!generators.test(fx)) {
      if (!ball(fx).test(fx)) return violated("SC1", fx, ball(fx));
      if (!ball(fx).is_subset_of(ball(x))) return violated("SC2", x, ball(x));
      generators.set(fx);
      chain.push_back(ball(fx));
      x = fx;
      continue;
    }

    // The orbit closed up: the generators form an f-closed set and the balls
    // a finite f-nest whose intersection is its smallest member.
    const PointSet meet = intersect_all(chain, n);
    if (last_meet && *last_meet == meet) return violated("SC2", x, meet);
    last_meet = meet;

    std::optional<PointId> chosen;
    for (PointId z : members(meet)) {
      if (ball(z).is_subset_of(meet)) {
        chosen = z;
        break;
      }
    }
    if (!chosen) return violated("NEST", std::nullopt, meet);
    const PointId z = *chosen;
    if (!ball(z).test(z)) return violated("SC1", z, ball(z));
    generators.set(z);
    chain.push_back(ball(z));
    x = z;
  }
}

// ---------------------------------------------------------------------------
// Completeness, preimages, subnests

bool is_spherically_complete(const BallSpace& space) {
  // construction already enforced a nonempty collection of nonempty balls
  return space.ball_count() > 0;
}

PreimageSpace preimage_space(std::span<const PointId> f, const BallSpace& target,
                             std::vector<std::string> source_names) {
  const std::size_t n1 = f.size();
  for (PointId v : f)
    if (v >= target.size()) throw Error(ErrorKind::DomainMismatch, "map image outside the target space");
  if (source_names.empty())
    for (std::size_t i = 0; i < n1; ++i) source_names.push_back(std::to_string(i));
  if (source_names.size() != n1) throw Error(ErrorKind::DomainMismatch, "source names do not match map size");

  std::vector<PointSet> pre;
  for (const auto& b : target.balls()) {
    PointSet s(n1);
    for (PointId x = 0; x < n1; ++x)
      if (b.test(f[x])) s.set(x);
    if (s.none())
      throw Error(ErrorKind::EmptyPreimage, "ball " + format_set(b, target.names()) + " has empty preimage");
    pre.push_back(std::move(s));
  }
  BallSpace space(std::move(source_names), pre);
  std::vector<std::size_t> ball_map;
  for (const auto& s : pre) ball_map.push_back(*space.find_ball(s));
  return PreimageSpace{std::move(space), std::move(ball_map)};
}

Nest preimage_nest(std::span<const PointId> f, std::size_t source_size, const Nest& target_nest) {
  if (f.size() != source_size) throw Error(ErrorKind::DomainMismatch, "map size does not match source");
  std::vector<PointSet> chain;
  for (const auto& b : target_nest.chain()) {
    PointSet s(source_size);
    for (PointId x = 0; x < source_size; ++x)
      if (f[x] >= b.size()) throw Error(ErrorKind::DomainMismatch, "map image outside target");
      else if (b.test(f[x])) s.set(x);
    chain.push_back(std::move(s));
  }
  return Nest(std::move(chain), "preimage of " + target_nest.provenance());
}

std::optional<PointId> transfer_intersection_point(std::span<const PointId> f, std::size_t source_size,
                                                   const Nest& target_nest) {
  const PointSet pulled = preimage_nest(f, source_size, target_nest).intersection();
  if (pulled.none()) return std::nullopt;
  return f[pulled.find_first()];
}

Nest cofinal_subnest(std::span<const PointSet> balls) {
  if (balls.empty()) throw Error(ErrorKind::Precondition, "a nest must be nonempty");
  auto sorted = sorted_by_reverse_inclusion({balls.begin(), balls.end()});
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!sorted[i].is_subset_of(sorted[i - 1]))
      throw Error(ErrorKind::Precondition, "balls are not totally ordered by inclusion");
  Nest out(std::move(sorted), "cofinal subnest");
  if (out.intersection() != intersect_all(balls, balls.front().size()))
    throw Error(ErrorKind::InternalAssertion, "subnest changed the intersection");
  return out;
}

std::vector<PointId> brute_force_fixed_points(const SelfMap& f) { return f.fixed_points(); }

}  // namespace ballfix

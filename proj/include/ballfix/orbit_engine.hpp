#pragma once

// Orbit f-nest solver and nest probes for ball spaces given by oracles
// (points and balls of arbitrary type, membership and inclusion decided by
// callbacks). Everything here is driven by a step budget.

#include "ballfix/error.hpp"
#include "ballfix/report.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ballfix {

template <class Point, class Ball>
struct PresentedSpace {
  std::function<bool(const Point&, const Ball&)> contains;
  /// a ⊆ b
  std::function<bool(const Ball&, const Ball&)> subset;
};

template <class Point, class Ball>
struct NestLink {
  Point generator;
  Ball ball;
};

template <class Point, class Ball>
struct PresentedReport {
  Outcome outcome = Outcome::BudgetExhausted;
  std::optional<Point> witness;
  std::vector<NestLink<Point, Ball>> nest;
  std::string violated;
  std::optional<Point> counterexample;
  std::size_t iterations = 0;
  std::size_t restarts = 0;

  bool found() const noexcept { return outcome == Outcome::FixedPointFound; }
};

/// Caller-supplied intersection chooser: inspects the current f-nest (largest
/// ball first in generation order) and either returns a point z of ⋂𝓝 with
/// B_z ⊆ ⋂𝓝 to restart from, or nullopt to keep following the orbit.
template <class Point, class Ball>
using IntersectionChooser =
    std::function<std::optional<Point>(std::span<const NestLink<Point, Ball>>)>;

template <class Point, class Ball>
struct PresentedRun {
  PresentedSpace<Point, Ball> space;
  std::function<Point(const Point&)> f;
  std::function<Ball(const Point&)> assign;
  IntersectionChooser<Point, Ball> chooser;
  /// Optional early stop (for example a truncation certificate); a point
  /// satisfying it ends the run with CertificateReached.
  std::function<bool(const Point&)> certificate;
};

/// Orbit f-nest solver in presented mode. Checks SC1 and the nesting part of
/// SC2 on every visited point; chooser answers are validated against every
/// ball of the current nest (ContractViolation when z ∉ ⋂𝓝).
template <class Point, class Ball>
PresentedReport<Point, Ball> solve_gfpt2_presented(const PresentedRun<Point, Ball>& run, Point start,
                                                   std::size_t budget) {
  if (budget == 0) throw Error(ErrorKind::Precondition, "budget must be positive");
  PresentedReport<Point, Ball> report;
  auto violated = [&](std::string tag, const Point& p) {
    report.outcome = Outcome::HypothesisViolated;
    report.violated = std::move(tag);
    report.counterexample = p;
    return report;
  };

  Point x = std::move(start);
  Ball bx = run.assign(x);
  if (!run.space.contains(x, bx)) return violated("SC1", x);
  report.nest.push_back({x, bx});

  while (report.iterations < budget) {
    ++report.iterations;
    Point fx = run.f(x);
    if (fx == x) {
      report.outcome = Outcome::FixedPointFound;
      report.witness = x;
      return report;
    }
    if (run.certificate && run.certificate(x)) {
      report.outcome = Outcome::CertificateReached;
      report.witness = x;
      return report;
    }

    std::optional<Point> z;
    if (run.chooser) z = run.chooser(report.nest);
    if (z) {
      for (const auto& link : report.nest)
        if (!run.space.contains(*z, link.ball))
          throw Error(ErrorKind::ContractViolation, "chooser returned a point outside the nest intersection");
      Ball bz = run.assign(*z);
      if (!run.space.contains(*z, bz)) return violated("SC1", *z);
      for (const auto& link : report.nest)
        if (!run.space.subset(bz, link.ball)) return violated("SC3", *z);
      ++report.restarts;
      report.nest.push_back({*z, bz});
      x = std::move(*z);
      continue;
    }

    Ball bfx = run.assign(fx);
    if (!run.space.contains(fx, bfx)) return violated("SC1", fx);
    if (!run.space.subset(bfx, report.nest.back().ball)) return violated("SC2", x);
    report.nest.push_back({fx, bfx});
    x = std::move(fx);
  }
  report.outcome = Outcome::BudgetExhausted;
  return report;
}

template <class Point, class Ball>
struct NestProbe {
  /// false when some probed level excludes every candidate point
  bool nonempty = false;
  std::optional<Point> survivor;
  std::vector<Ball> witness_nest;
  std::size_t levels = 0;
  std::size_t probes = 0;
  std::string detail;
};

/// Probes the intersection of the first `levels` balls of a presented nest
/// with a stream of candidate points. A candidate lying in every level is a
/// witness of nonempty intersection; otherwise the nest is reported empty so
/// far, together with the probed levels as witness.
template <class Point, class Ball>
NestProbe<Point, Ball> probe_nest_intersection(const PresentedSpace<Point, Ball>& space,
                                               const std::function<Ball(std::size_t)>& level,
                                               std::size_t levels,
                                               const std::function<std::optional<Point>(std::size_t)>& candidate,
                                               std::size_t budget) {
  if (levels == 0) throw Error(ErrorKind::Precondition, "a nest must be nonempty");
  NestProbe<Point, Ball> out;
  out.levels = levels;
  for (std::size_t i = 0; i < levels; ++i) {
    out.witness_nest.push_back(level(i));
    if (i > 0 && !space.subset(out.witness_nest[i], out.witness_nest[i - 1]))
      throw Error(ErrorKind::Precondition, "presented balls do not form a nest");
  }
  for (std::size_t k = 0; k < budget; ++k) {
    auto p = candidate(k);
    if (!p) break;
    ++out.probes;
    bool inside = true;
    for (const auto& b : out.witness_nest)
      if (!space.contains(*p, b)) {
        inside = false;
        break;
      }
    if (inside) {
      out.nonempty = true;
      out.survivor = std::move(*p);
      out.detail = "candidate lies in every probed level";
      return out;
    }
  }
  out.detail = "every probed candidate is excluded by some level";
  return out;
}

/// Spherical completeness over a stream of presented nests: the first nest
/// whose probe finds no survivor is returned as the witness.
template <class Point, class Ball>
struct CompletenessVerdict {
  bool complete = true;
  std::optional<std::size_t> failing_nest;
  std::vector<NestProbe<Point, Ball>> probes;
};

template <class Point, class Ball>
CompletenessVerdict<Point, Ball> is_spherically_complete_presented(
    const PresentedSpace<Point, Ball>& space,
    std::span<const std::function<Ball(std::size_t)>> nests, std::size_t levels,
    const std::function<std::optional<Point>(std::size_t)>& candidate, std::size_t budget) {
  CompletenessVerdict<Point, Ball> v;
  for (std::size_t i = 0; i < nests.size(); ++i) {
    v.probes.push_back(probe_nest_intersection<Point, Ball>(space, nests[i], levels, candidate, budget));
    if (!v.probes.back().nonempty && v.complete) {
      v.complete = false;
      v.failing_nest = i;
    }
  }
  return v;
}

/// SC1/SC2/SC3 along sampled orbits of a presented space. SC3 is tested on
/// the supplied probe points against the orbit nest of each start.
template <class Point, class Ball>
ConditionReport check_sc_axioms_sampled(const PresentedSpace<Point, Ball>& space,
                                        const std::function<Point(const Point&)>& f,
                                        const std::function<Ball(const Point&)>& assign,
                                        std::span<const Point> starts, std::size_t orbit_length,
                                        std::span<const Point> probes) {
  ConditionReport report;
  report.sampled = true;
  auto& sc1 = report.add("SC1");
  auto& sc2 = report.add("SC2");
  auto& sc3 = report.add("SC3");
  for (const auto& s : starts) {
    std::vector<Point> orbit{s};
    std::vector<Ball> balls{assign(s)};
    for (std::size_t i = 0; i < orbit_length; ++i) {
      Point next = f(orbit.back());
      if (next == orbit.back()) break;
      balls.push_back(assign(next));
      orbit.push_back(std::move(next));
    }
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      if (sc1.holds && !space.contains(orbit[i], balls[i])) {
        sc1.holds = false;
        sc1.detail = "sampled point not in its ball";
      }
      if (i + 1 < orbit.size() && sc2.holds && !space.subset(balls[i + 1], balls[i])) {
        sc2.holds = false;
        sc2.detail = "B_fx not contained in B_x on a sampled orbit";
      }
    }
    if (sc2.holds && orbit.size() > 1) {
      bool dropped = false;
      for (std::size_t i = 1; i < orbit.size() && !dropped; ++i)
        dropped = !space.subset(balls[0], balls[i]);
      if (!dropped) {
        sc2.holds = false;
        sc2.detail = "no strict descent within the sampled orbit length";
      }
    }
    for (const auto& z : probes) {
      bool in_all = true;
      for (const auto& b : balls) in_all = in_all && space.contains(z, b);
      if (!in_all) continue;
      const Ball bz = assign(z);
      for (const auto& b : balls)
        if (sc3.holds && !space.subset(bz, b)) {
          sc3.holds = false;
          sc3.detail = "probe z in the orbit-nest intersection with B_z escaping it";
        }
    }
  }
  return report;
}

}  // namespace ballfix

#include "ballfix/sweep.hpp"

#include "ballfix/ball_space.hpp"
#include "ballfix/topology.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace ballfix {

namespace {

constexpr std::size_t kMaxCounterexamples = 20;

struct Tally {
  std::size_t instances = 0;
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> counterexamples;

  void bump(const std::string& key) { ++counts[key]; }
  void fail(std::string what) {
    if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(std::move(what));
  }
  void merge(Tally&& o) {
    instances += o.instances;
    for (auto& [k, v] : o.counts) counts[k] += v;
    for (auto& c : o.counterexamples) fail(std::move(c));
  }
};

/// Runs body(i, tally) for i in [0, n) over `jobs` threads.
Tally parallel_tally(std::size_t n, std::size_t jobs, const std::function<void(std::size_t, Tally&)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<Tally> parts(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&](Tally& t) {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i, t);
  };
  std::vector<std::thread> threads;
  for (std::size_t j = 1; j < jobs; ++j) threads.emplace_back(worker, std::ref(parts[j]));
  worker(parts[0]);
  for (auto& t : threads) t.join();
  Tally out;
  for (auto& p : parts) out.merge(std::move(p));
  return out;
}

SweepSummary finish(std::string family, Tally&& t, std::chrono::steady_clock::time_point start) {
  SweepSummary s;
  s.family = std::move(family);
  s.instances = t.instances;
  s.counts = std::move(t.counts);
  s.counterexamples = std::move(t.counterexamples);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

Mask permute(Mask m, const std::vector<std::size_t>& perm) {
  Mask out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (m >> i & 1) out |= Mask{1} << perm[i];
  return out;
}

std::vector<Mask> canonical_collection(const std::vector<Mask>& coll, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Mask> best;
  do {
    std::vector<Mask> cur;
    for (Mask m : coll) cur.push_back(permute(m, perm));
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = std::move(cur);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

PointSet mask_set(Mask m, std::size_t n) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (m >> i & 1) s.set(i);
  return s;
}

std::string describe(std::size_t n, const std::vector<Mask>& balls, const SelfMap& f) {
  std::ostringstream os;
  os << "|X|=" << n << " balls={";
  for (std::size_t i = 0; i < balls.size(); ++i) os << (i ? "," : "") << format_set(mask_set(balls[i], n));
  os << "} f=[";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f(i);
  os << "]";
  return os.str();
}

void check_bounds(const char* what, std::size_t value, std::size_t lo, std::size_t hi) {
  if (value < lo || value > hi)
    throw Error(ErrorKind::BoundExceeded, std::string(what) + " = " + std::to_string(value) + " outside [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

SweepSummary sweep_nfpt(std::size_t max_points, std::size_t max_balls, std::size_t jobs) {
  check_bounds("max points", max_points, 1, kMaxNfptSweepPoints);
  check_bounds("max balls", max_balls, 1, kMaxNfptSweepBalls);
  const auto start = std::chrono::steady_clock::now();

  struct Instance {
    std::size_t n;
    std::vector<Mask> balls;
  };
  std::vector<Instance> spaces;
  for (std::size_t n = 1; n <= max_points; ++n) {
    const std::size_t subsets = (std::size_t{1} << n) - 1;
    std::set<std::vector<Mask>> seen;
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << subsets); ++bits) {
      if (static_cast<std::size_t>(std::popcount(bits)) > max_balls) continue;
      std::vector<Mask> coll;
      for (std::size_t i = 0; i < subsets; ++i)
        if (bits >> i & 1) coll.push_back(static_cast<Mask>(i + 1));
      if (seen.insert(canonical_collection(coll, n)).second) spaces.push_back({n, std::move(coll)});
    }
  }

  Tally t = parallel_tally(spaces.size(), jobs, [&](std::size_t idx, Tally& tally) {
    const Instance& inst = spaces[idx];
    std::vector<PointSet> balls;
    for (Mask m : inst.balls) balls.push_back(mask_set(m, inst.n));
    const BallSpace space = BallSpace::unnamed(inst.n, balls);
    for (const SelfMap& f : all_self_maps(inst.n)) {
      ++tally.instances;
      const auto fixed = brute_force_fixed_points(f);
      try {
        if (check_c_conditions(space, f).passed()) {
          tally.bump("C-pass");
          const FixedPointReport r = solve_nfpt1(space, f);
          if (!r.found() || std::find(fixed.begin(), fixed.end(), *r.witness) == fixed.end())
            tally.fail("nest solver: " + describe(inst.n, inst.balls, f));
        }
        if (check_cu_conditions(space, f).passed()) {
          tally.bump("CU-pass");
          const FixedPointReport r = solve_nfpt2(space, f);
          if (!r.found() || fixed.size() != 1 || fixed.front() != *r.witness)
            tally.fail("iterated images: " + describe(inst.n, inst.balls, f));
        }
        if (!fixed.empty()) tally.bump("has-fixed-point");
      } catch (const Error& e) {
        tally.fail(std::string(e.what()) + ": " + describe(inst.n, inst.balls, f));
      }
    }
  });
  t.counts["spaces"] = spaces.size();
  return finish("nfpt", std::move(t), start);
}

SweepSummary sweep_gfpt(std::size_t max_points, std::size_t jobs) {
  check_bounds("max points", max_points, 1, kMaxGfptSweepPoints);
  const auto start = std::chrono::steady_clock::now();

  struct Instance {
    std::size_t n;
    SelfMap f;
  };
  std::vector<Instance> maps;
  for (std::size_t n = 1; n <= max_points; ++n)
    for (SelfMap& f : all_self_maps(n)) maps.push_back({n, std::move(f)});

  Tally t = parallel_tally(maps.size(), jobs, [&](std::size_t idx, Tally& tally) {
    const std::size_t n = maps[idx].n;
    const SelfMap& f = maps[idx].f;
    const std::size_t subsets = (std::size_t{1} << n) - 1;
    const auto fixed = brute_force_fixed_points(f);
    std::vector<std::size_t> choice(n, 0);
    while (true) {
      ++tally.instances;
      BallAssignment assign;
      std::vector<Mask> used;
      for (std::size_t x = 0; x < n; ++x) {
        const Mask m = static_cast<Mask>(choice[x] + 1);
        assign.balls.push_back(mask_set(m, n));
        used.push_back(m);
      }
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      try {
        std::vector<PointSet> balls;
        for (Mask m : used) balls.push_back(mask_set(m, n));
        const BallSpace space = BallSpace::unnamed(n, balls);
        const ConditionReport sc = check_sc_axioms(space, f, assign);
        const bool orbit = sc.holds("SC1") && sc.holds("SC2");
        if (orbit && sc.holds("NEST")) {
          tally.bump("SC12-NEST");
          for (PointId s = 0; s < n; ++s) {
            const FixedPointReport r = solve_gfpt2(space, f, assign, kDefaultBudget, s);
            if (!r.found() || !f.is_fixed(*r.witness)) {
              tally.fail("orbit solver from " + std::to_string(s) + ": " + describe(n, used, f));
              break;
            }
          }
        }
        if (orbit && sc.holds("SC3")) {
          tally.bump("SC123");
          if (fixed.empty()) tally.fail("self-contractive without fixed point: " + describe(n, used, f));
        }
      } catch (const Error& e) {
        tally.fail(std::string(e.what()) + ": " + describe(n, used, f));
      }
      std::size_t i = 0;
      while (i < n && ++choice[i] == subsets) choice[i++] = 0;
      if (i == n) break;
    }
  });
  t.counts["maps"] = maps.size();
  return finish("gfpt", std::move(t), start);
}

SweepSummary sweep_topo(std::size_t max_points, std::size_t jobs) {
  check_bounds("max points", max_points, 1, kMaxTopoSweepPoints);
  const auto start = std::chrono::steady_clock::now();
  std::vector<FiniteTopology> tops;
  for (std::size_t n = 1; n <= max_points; ++n)
    for (FiniteTopology& top : enumerate_topologies(n)) tops.push_back(std::move(top));

  Tally t = parallel_tally(tops.size(), jobs, [&](std::size_t idx, Tally& tally) {
    const FiniteTopology& top = tops[idx];
    const BallSpace space = top.closed_ball_space();
    std::string name = "topology {";
    for (std::size_t i = 0; i < top.opens().size(); ++i) name += (i ? "," : "") + top.format(top.opens()[i]);
    name += "}";

    bool complete = is_spherically_complete(space);
    for (const auto& chain : maximal_chains(space.balls())) {
      PointSet meet = chain.front();
      for (const auto& b : chain) meet &= b;
      if (meet.none()) complete = false;
    }
    if (!complete) tally.fail("closed sets not spherically complete: " + name);

    for (const SelfMap& f : all_self_maps(top.size())) {
      if (!is_closed_map(top, f).closed) continue;
      ++tally.instances;
      std::string where = name + " f=[";
      for (std::size_t i = 0; i < f.size(); ++i) where += (i ? "," : "") + std::to_string(f(i));
      where += "]";
      try {
        const auto fixed = brute_force_fixed_points(f);
        const TopnReport hyp = check_topn_hypotheses(top, f);
        tally.bump(to_string(hyp.verdict));
        if (hyp.verdict != TopnVerdict::Fails) {
          const FixedPointReport r = solve_topn(top, f);
          if (!r.found() || std::find(fixed.begin(), fixed.end(), *r.witness) == fixed.end())
            tally.fail("topn solver: " + where);
          if (hyp.verdict == TopnVerdict::Strong && fixed.size() != 1) tally.fail("strong but not unique: " + where);
        }
        if (top3_hypothesis(top, f)) {
          tally.bump("top3");
          if (!check_sc_axioms(space, f, smallest_invariant_assignment(top, f)).passed())
            tally.fail("top3 assignment fails the orbit axioms: " + where);
        }
        if (top.size() <= 3) {
          const JLemmaReport j = check_j_lemmas(top, f);
          if (j.preconditions) {
            tally.bump("J-preconditions");
            if (!j.checks.passed()) tally.fail("J-lemma chain: " + where);
          }
        }
      } catch (const Error& e) {
        tally.fail(std::string(e.what()) + ": " + where);
      }
    }
  });
  t.counts["topologies"] = tops.size();
  return finish("topo", std::move(t), start);
}

SweepSummary run_sweep(const std::string& family, std::size_t max_points, std::size_t max_balls, std::size_t jobs) {
  if (family == "nfpt") return sweep_nfpt(max_points, max_balls, jobs);
  if (family == "gfpt") return sweep_gfpt(max_points, jobs);
  if (family == "topo") return sweep_topo(max_points, jobs);
  throw Error(ErrorKind::Parse, "unknown sweep family '" + family + "' (nfpt, gfpt, topo)");
}

std::string format_summary(const SweepSummary& s) {
  std::ostringstream os;
  os << s.family << ": " << s.instances << " instances, " << s.counterexamples.size() << " counterexamples, "
     << s.seconds << " s\n";
  for (const auto& [k, v] : s.counts) os << "  " << k << " = " << v << "\n";
  for (const auto& c : s.counterexamples) os << "  counterexample: " << c << "\n";
  return os.str();
}

}  // namespace ballfix

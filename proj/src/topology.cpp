#include "ballfix/topology.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace ballfix {

namespace {

bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

Mask permute(Mask m, const std::vector<std::size_t>& perm) {
  Mask out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (m >> i & 1) out |= Mask{1} << perm[i];
  return out;
}

bool closed_under_lattice_ops(const std::vector<Mask>& sorted, Mask full) {
  if (sorted.empty() || sorted.front() != 0 || sorted.back() != full) return false;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (!std::binary_search(sorted.begin(), sorted.end(), sorted[i] | sorted[j])) return false;
      if (!std::binary_search(sorted.begin(), sorted.end(), sorted[i] & sorted[j])) return false;
    }
  return true;
}

}  // namespace

FiniteTopology::FiniteTopology(std::size_t n, std::vector<Mask> opens, std::vector<std::string> names)
    : names_(std::move(names)), opens_(std::move(opens)) {
  if (n == 0 || n > kMaxPoints)
    throw Error(ErrorKind::Precondition, "finite topologies need 1 to " + std::to_string(kMaxPoints) + " points");
  if (names_.empty())
    for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
  if (names_.size() != n) throw Error(ErrorKind::Precondition, "point names do not match the point count");
  std::sort(opens_.begin(), opens_.end());
  opens_.erase(std::unique(opens_.begin(), opens_.end()), opens_.end());
  for (Mask o : opens_)
    if (!is_subset(o, full())) throw Error(ErrorKind::Precondition, "open set " + std::to_string(o) + " leaves X");
  if (!closed_under_lattice_ops(opens_, full()))
    throw Error(ErrorKind::Precondition, "open sets must contain the empty set and X and be closed under union and intersection");
  for (Mask o : opens_) closed_.push_back(full() & ~o);
  std::sort(closed_.begin(), closed_.end());
}

FiniteTopology FiniteTopology::discrete(std::size_t n) {
  std::vector<Mask> opens(std::size_t{1} << n);
  std::iota(opens.begin(), opens.end(), Mask{0});
  return FiniteTopology(n, std::move(opens));
}

FiniteTopology FiniteTopology::indiscrete(std::size_t n) {
  return FiniteTopology(n, {0, (Mask{1} << n) - 1});
}

FiniteTopology FiniteTopology::sierpinski() { return FiniteTopology(2, {0, 1, 3}, {"o", "c"}); }

FiniteTopology FiniteTopology::from_names(std::vector<std::string> names, const std::vector<std::vector<std::string>>& opens) {
  std::vector<Mask> masks;
  for (const auto& open : opens) {
    Mask m = 0;
    for (const auto& p : open) {
      auto it = std::find(names.begin(), names.end(), p);
      if (it == names.end()) throw Error(ErrorKind::Precondition, "unknown point '" + p + "' in an open set");
      m |= Mask{1} << (it - names.begin());
    }
    masks.push_back(m);
  }
  const std::size_t n = names.size();
  return FiniteTopology(n, std::move(masks), std::move(names));
}

PointId FiniteTopology::point(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorKind::Precondition, "unknown point '" + name + "'");
  return static_cast<PointId>(it - names_.begin());
}

bool FiniteTopology::is_open(Mask m) const { return std::binary_search(opens_.begin(), opens_.end(), m); }

bool FiniteTopology::is_closed(Mask m) const { return std::binary_search(closed_.begin(), closed_.end(), m); }

Mask FiniteTopology::closure(Mask m) const {
  Mask out = full();
  for (Mask c : closed_)
    if (is_subset(m, c)) out &= c;
  return out;
}

bool FiniteTopology::is_connected() const {
  return std::none_of(opens_.begin(), opens_.end(), [&](Mask o) { return o != 0 && o != full() && is_closed(o); });
}

bool FiniteTopology::is_hausdorff() const {
  for (std::size_t p = 0; p < size(); ++p)
    for (std::size_t q = p + 1; q < size(); ++q) {
      bool separated = false;
      for (Mask u : opens_) {
        if (!(u >> p & 1)) continue;
        for (Mask v : opens_)
          if ((v >> q & 1) && (u & v) == 0) separated = true;
      }
      if (!separated) return false;
    }
  return true;
}

PointSet FiniteTopology::to_set(Mask m) const {
  PointSet s(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (m >> i & 1) s.set(i);
  return s;
}

Mask FiniteTopology::to_mask(const PointSet& s) const {
  Mask m = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.test(i)) m |= Mask{1} << i;
  return m;
}

std::string FiniteTopology::format(Mask m) const { return format_set(to_set(m), names_); }

BallSpace FiniteTopology::closed_ball_space() const {
  std::vector<PointSet> balls;
  for (Mask c : closed_)
    if (c != 0) balls.push_back(to_set(c));
  return BallSpace(names_, std::move(balls));
}

FiniteTopology FiniteTopology::subspace(Mask b) const {
  std::vector<std::size_t> index(size(), size());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < size(); ++i)
    if (b >> i & 1) {
      index[i] = names.size();
      names.push_back(names_[i]);
    }
  std::vector<Mask> opens;
  for (Mask o : opens_) {
    Mask m = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if ((o & b) >> i & 1) m |= Mask{1} << index[i];
    opens.push_back(m);
  }
  const std::size_t n = names.size();
  return FiniteTopology(n, std::move(opens), std::move(names));
}

std::vector<Mask> FiniteTopology::canonical_form() const {
  if (size() > 8) throw Error(ErrorKind::BoundExceeded, "canonical forms are computed for at most 8 points");
  std::vector<std::size_t> perm(size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Mask> best;
  do {
    std::vector<Mask> cur;
    for (Mask o : opens_) cur.push_back(permute(o, perm));
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = std::move(cur);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Mask image_mask(const SelfMap& f, Mask m) {
  Mask out = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (m >> i & 1) out |= Mask{1} << f(i);
  return out;
}

ClosedMapVerdict is_closed_map(const FiniteTopology& top, const SelfMap& f) {
  if (f.size() != top.size()) throw Error(ErrorKind::DomainMismatch, "map and topology differ in size");
  for (Mask c : top.closed_sets())
    if (!top.is_closed(image_mask(f, c))) return ClosedMapVerdict{false, c};
  return {};
}

std::string to_string(TopnVerdict v) {
  switch (v) {
    case TopnVerdict::Strong: return "strong";
    case TopnVerdict::Weak: return "weak";
    case TopnVerdict::Fails: return "fails";
  }
  return "?";
}

namespace {

bool contracting_mask(const SelfMap& f, Mask b) {
  const Mask img = image_mask(f, b);
  if (std::popcount(b) == 1) return img == b;
  return is_subset(img, b) && img != b;
}

}  // namespace

TopnReport check_topn_hypotheses(const FiniteTopology& top, const SelfMap& f) {
  const ClosedMapVerdict closed = is_closed_map(top, f);
  if (!closed.closed)
    throw Error(ErrorKind::Precondition, "map is not closed: image of " + top.format(*closed.witness) + " is not closed");
  TopnReport rep;
  bool strong = true, weak = true;
  for (Mask b : top.closed_sets()) {
    if (b == 0 || !is_subset(image_mask(f, b), b)) continue;
    rep.invariant_closed.push_back(b);
    if (contracting_mask(f, b)) continue;
    if (strong) {
      strong = false;
      rep.witness = b;
    }
    const bool has_sub = std::any_of(top.closed_sets().begin(), top.closed_sets().end(), [&](Mask c) {
      return c != 0 && is_subset(c, b) && contracting_mask(f, c);
    });
    if (!has_sub && weak) {
      weak = false;
      rep.witness = b;
    }
  }
  if (strong) {
    rep.verdict = TopnVerdict::Strong;
    rep.detail = "every invariant closed set is f-contracting";
  } else if (weak) {
    rep.verdict = TopnVerdict::Weak;
    rep.detail = top.format(*rep.witness) + " is invariant but not f-contracting";
  } else {
    rep.verdict = TopnVerdict::Fails;
    rep.detail = top.format(*rep.witness) + " contains no closed f-contracting set";
  }
  return rep;
}

FixedPointReport solve_topn(const FiniteTopology& top, const SelfMap& f) {
  const TopnReport hyp = check_topn_hypotheses(top, f);
  if (hyp.verdict == TopnVerdict::Fails) {
    FixedPointReport rep;
    rep.outcome = Outcome::HypothesisViolated;
    rep.violated = "topn";
    rep.counterexample_ball = top.to_set(*hyp.witness);
    return rep;
  }
  const BallSpace space = top.closed_ball_space();
  FixedPointReport rep = hyp.verdict == TopnVerdict::Strong ? solve_nfpt2(space, f) : solve_nfpt1(space, f);
  if (!rep.found() || !f.is_fixed(*rep.witness))
    throw Error(ErrorKind::InternalAssertion, "closed-set solver found no fixed point under the " +
                                                  to_string(hyp.verdict) + " hypothesis");
  if (hyp.verdict == TopnVerdict::Strong && f.fixed_points().size() != 1)
    throw Error(ErrorKind::InternalAssertion, "strong hypothesis but the fixed point is not unique");
  return rep;
}

Mask smallest_invariant_closed(const FiniteTopology& top, const SelfMap& f, PointId x) {
  Mask out = top.full();
  for (Mask b : top.closed_sets())
    if ((b >> x & 1) && is_subset(image_mask(f, b), b)) out &= b;
  if (!top.is_closed(out) || !is_subset(image_mask(f, out), out))
    throw Error(ErrorKind::InternalAssertion, "intersection of invariant closed sets is not invariant and closed");
  return out;
}

BallAssignment smallest_invariant_assignment(const FiniteTopology& top, const SelfMap& f) {
  BallAssignment a;
  for (std::size_t x = 0; x < top.size(); ++x) a.balls.push_back(top.to_set(smallest_invariant_closed(top, f, x)));
  return a;
}

bool top3_hypothesis(const FiniteTopology& top, const SelfMap& f) {
  for (std::size_t x = 0; x < top.size(); ++x) {
    if (f.is_fixed(x)) continue;
    const bool ok = std::any_of(top.closed_sets().begin(), top.closed_sets().end(), [&](Mask b) {
      const Mask img = image_mask(f, b);
      return (b >> x & 1) && !(img >> x & 1) && is_subset(img, b);
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<std::vector<Mask>> open_covers(const FiniteTopology& top, std::size_t cap, bool* truncated) {
  std::vector<Mask> opens;
  for (Mask o : top.opens())
    if (o != 0) opens.push_back(o);
  if (opens.size() > 30) throw Error(ErrorKind::BoundExceeded, "too many open sets to enumerate covers");
  std::vector<std::vector<Mask>> out;
  if (truncated) *truncated = false;
  const std::uint64_t limit = std::uint64_t{1} << opens.size();
  for (std::uint64_t bits = 1; bits < limit; ++bits) {
    std::vector<Mask> cover;
    Mask un = 0;
    for (std::size_t i = 0; i < opens.size(); ++i)
      if (bits >> i & 1) {
        cover.push_back(opens[i]);
        un |= opens[i];
      }
    if (un != top.full()) continue;
    bool antichain = true;
    for (std::size_t i = 0; i < cover.size() && antichain; ++i)
      for (std::size_t j = 0; j < cover.size(); ++j)
        if (i != j && is_subset(cover[i], cover[j])) antichain = false;
    if (!antichain) continue;
    if (out.size() == cap) {
      if (truncated) *truncated = true;
      break;
    }
    out.push_back(std::move(cover));
  }
  return out;
}

std::vector<Mask> greatest_j_refinement(const FiniteTopology& top, const SelfMap& f, const std::vector<Mask>& cover) {
  std::vector<Mask> fam;
  for (Mask v : top.opens())
    if (v != 0 && std::any_of(cover.begin(), cover.end(), [&](Mask u) { return is_subset(v, u); })) fam.push_back(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const Mask img = image_mask(f, top.closure(fam[i]));
      if (std::none_of(fam.begin(), fam.end(), [&](Mask w) { return is_subset(img, w); })) {
        fam.erase(fam.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return fam;
}

JContractionVerdict check_j_contraction(const FiniteTopology& top, const SelfMap& f, std::size_t cover_cap) {
  JContractionVerdict v;
  bool truncated = false;
  const auto covers = open_covers(top, cover_cap, &truncated);
  v.complete = !truncated;
  for (const auto& cover : covers) {
    ++v.covers_checked;
    const auto fam = greatest_j_refinement(top, f, cover);
    Mask un = 0;
    for (Mask w : fam) un |= w;
    if (un != top.full()) {
      v.holds = false;
      v.failing_cover = cover;
      v.detail = "a cover has no J-contractive refinement";
      return v;
    }
  }
  v.detail = std::to_string(v.covers_checked) + " covers" + (v.complete ? "" : " (partial: cover cap reached)");
  return v;
}

JLemmaReport check_j_lemmas(const FiniteTopology& top, const SelfMap& f) {
  JLemmaReport rep;
  Check& conn = rep.checks.add("connected");
  conn.holds = top.is_connected();
  Check& haus = rep.checks.add("Hausdorff");
  haus.holds = top.is_hausdorff();
  Check& jc = rep.checks.add("J-contraction");
  const JContractionVerdict jv = check_j_contraction(top, f);
  jc.holds = jv.holds;
  jc.detail = jv.detail;
  rep.preconditions = conn.holds && haus.holds && jc.holds;

  Check& j1 = rep.checks.add("J1");
  Check& j2 = rep.checks.add("J2");
  Check& st = rep.checks.add("strong-topn");
  if (!rep.preconditions) {
    std::string why;
    for (const Check* c : {&conn, &haus, &jc})
      if (!c->holds) why += (why.empty() ? "" : ", ") + c->tag;
    rep.detail = "precondition fails: " + why;
    for (Check* c : {&j1, &j2, &st}) {
      c->evaluated = false;
      c->detail = rep.detail;
    }
    return rep;
  }
  for (Mask b : top.closed_sets()) {
    if (b == 0 || !is_subset(image_mask(f, b), b)) continue;
    const FiniteTopology sub = top.subspace(b);
    std::vector<PointId> index(top.size());
    std::vector<PointId> table;
    for (std::size_t i = 0, k = 0; i < top.size(); ++i)
      if (b >> i & 1) index[i] = k++;
    for (std::size_t i = 0; i < top.size(); ++i)
      if (b >> i & 1) table.push_back(index[f(i)]);
    if (!check_j_contraction(sub, SelfMap(table)).holds && j1.holds) {
      j1.holds = false;
      j1.detail = "restriction to " + top.format(b) + " is not a J-contraction";
    }
  }
  const bool onto = image_mask(f, top.full()) == top.full();
  j2.holds = !onto || top.size() == 1;
  st.holds = check_topn_hypotheses(top, f).verdict == TopnVerdict::Strong;
  rep.detail = "a finite connected Hausdorff space has exactly one point";
  return rep;
}

std::vector<FiniteTopology> enumerate_topologies(std::size_t n, bool up_to_relabeling) {
  if (n == 0 || n > 4) throw Error(ErrorKind::BoundExceeded, "topologies are enumerated for 1 to 4 points");
  const Mask full = (Mask{1} << n) - 1;
  std::vector<Mask> proper;
  for (Mask m = 1; m < full; ++m) proper.push_back(m);
  std::vector<FiniteTopology> out;
  std::set<std::vector<Mask>> seen;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << proper.size()); ++bits) {
    std::vector<Mask> fam{0};
    for (std::size_t i = 0; i < proper.size(); ++i)
      if (bits >> i & 1) fam.push_back(proper[i]);
    fam.push_back(full);
    if (!closed_under_lattice_ops(fam, full)) continue;
    FiniteTopology top(n, std::move(fam));
    if (up_to_relabeling && !seen.insert(top.canonical_form()).second) continue;
    out.push_back(std::move(top));
  }
  return out;
}

std::vector<SelfMap> all_self_maps(std::size_t n) {
  std::vector<SelfMap> out;
  std::vector<PointId> table(n, 0);
  while (true) {
    out.emplace_back(table);
    std::size_t i = 0;
    while (i < n && ++table[i] == n) table[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace ballfix

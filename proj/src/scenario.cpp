#include "ballfix/scenario.hpp"

#include "ballfix/ball_space.hpp"
#include "ballfix/banach.hpp"
#include "ballfix/ordered.hpp"
#include "ballfix/padic.hpp"
#include "ballfix/topology.hpp"
#include "ballfix/ultrametric.hpp"

#include "json.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace ballfix {

namespace {

using Json = nlohmann::ordered_json;

Error schema_error(const std::string& what) { return Error(ErrorKind::Parse, what); }

const Json& req(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw schema_error(std::string("missing key '") + key + "'");
  return j.at(key);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::string value_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw schema_error("expected a number or a string, got " + j.dump());
}

std::vector<std::string> string_list(const Json& j) {
  if (!j.is_array()) throw schema_error("expected an array of names, got " + j.dump());
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::vector<std::pair<std::string, std::string>> map_pairs(const Json& j) {
  if (!j.is_object()) throw schema_error("\"map\" must be an object from point to point");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : j.items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

Json set_names(const PointSet& s, std::span<const std::string> names) {
  Json out = Json::array();
  for (PointId p : members(s)) out.push_back(names[p]);
  return out;
}

Json check_map(const ConditionReport& r) {
  Json out = Json::object();
  for (const auto& c : r.checks) out[c.tag] = c.evaluated ? Json(c.holds) : Json("not evaluated");
  return out;
}

void absorb(ConditionReport& into, const ConditionReport& from, const std::string& prefix = {}) {
  for (Check c : from.checks) {
    c.tag = prefix + c.tag;
    into.checks.push_back(std::move(c));
  }
}

void fixed_point_fields(Json& out, const FixedPointReport& r, std::span<const std::string> names) {
  out["outcome"] = std::string(to_string(r.outcome));
  out["fixed_point"] = r.witness ? Json(names[*r.witness]) : Json(nullptr);
  Json nest = Json::array();
  for (const auto& b : r.nest.chain()) nest.push_back(set_names(b, names));
  out["nest"] = nest;
  if (!r.violated.empty()) out["violated"] = r.violated;
}

// ---------------------------------------------------------------------------

Json run_ballspace(const Json& j, ConditionReport& checks) {
  std::vector<std::string> names = string_list(req(j, "points"));
  std::vector<std::vector<std::string>> balls;
  for (const auto& b : req(j, "balls")) balls.push_back(string_list(b));
  const BallSpace space = BallSpace::from_names(names, balls);
  const SelfMap f = SelfMap::from_names(space, map_pairs(req(j, "map")));
  const std::string solver = get_or<std::string>(j, "solver", "nfpt1");

  Json out;
  Json fixed = Json::array();
  for (PointId p : brute_force_fixed_points(f)) fixed.push_back(space.name(p));
  if (solver == "nfpt1") {
    const ConditionReport c = check_c_conditions(space, f);
    absorb(checks, c);
    out["conditions"] = check_map(c);
    fixed_point_fields(out, solve_nfpt1(space, f), space.names());
  } else if (solver == "nfpt2") {
    const ConditionReport c = check_cu_conditions(space, f);
    absorb(checks, c);
    out["conditions"] = check_map(c);
    fixed_point_fields(out, solve_nfpt2(space, f), space.names());
  } else if (solver == "gfpt2") {
    BallAssignment assign;
    const Json& a = req(j, "assignment");
    for (const auto& name : names) {
      if (!a.contains(name)) throw schema_error("assignment misses point '" + name + "'");
      const Json& entry = a.at(name);
      PointSet s(names.size());
      if (entry.is_number_unsigned()) {
        const auto index = entry.get<std::size_t>();
        if (index >= balls.size())
          throw schema_error("assignment of '" + name + "' names ball " + std::to_string(index) + " of " +
                             std::to_string(balls.size()));
        for (const auto& m : balls[index]) s.set(space.point(m));
      } else {
        for (const auto& m : string_list(entry)) s.set(space.point(m));
      }
      assign.balls.push_back(std::move(s));
    }
    const ConditionReport c = check_sc_axioms(space, f, assign);
    absorb(checks, c);
    out["conditions"] = check_map(c);
    const PointId start = j.contains("start") ? space.point(j.at("start").get<std::string>()) : 0;
    fixed_point_fields(out, solve_gfpt2(space, f, assign, kDefaultBudget, start), space.names());
  } else {
    throw schema_error("unknown solver '" + solver + "' (nfpt1, nfpt2, gfpt2)");
  }
  out["fixed_points"] = fixed;
  return out;
}

ValuePoset parse_values(const Json& j) {
  if (j.contains("chain")) return ValuePoset::chain(string_list(j.at("chain")));
  const Json& p = req(j, "poset");
  std::vector<std::pair<std::string, std::string>> leq;
  for (const auto& e : req(p, "leq")) {
    const auto pair = string_list(e);
    if (pair.size() != 2) throw schema_error("poset relations are pairs [a, b] meaning a <= b");
    leq.emplace_back(pair[0], pair[1]);
  }
  return ValuePoset::from_names(string_list(req(p, "names")), leq, req(p, "bottom").get<std::string>());
}

Json run_ultrametric(const Json& j, ConditionReport& checks) {
  const std::vector<std::string> names = string_list(req(j, "points"));
  ValuePoset values = parse_values(j);
  std::vector<ValueId> dist;
  const Json& rows = req(j, "distances");
  if (!rows.is_array() || rows.size() != names.size()) throw schema_error("\"distances\" must have one row per point");
  for (const auto& row : rows) {
    const auto r = string_list(row);
    if (r.size() != names.size()) throw schema_error("\"distances\" rows must have one entry per point");
    for (const auto& v : r) dist.push_back(values.id_of(v));
  }
  const UltrametricSpace space(names, std::move(values), std::move(dist));
  Json out;
  const ConditionReport ax = space.check_axioms();
  absorb(checks, ax);
  out["axioms"] = check_map(ax);
  if (!j.contains("map")) return out;

  const SelfMap f = SelfMap::from_names(space.ball_space(), map_pairs(j.at("map")));
  out["contracting"] = is_contracting(space, f).holds;
  const ConditionReport hyp = check_sufpt_hypotheses(space, f);
  absorb(checks, hyp);
  out["hypotheses"] = check_map(hyp);
  const PointId start = j.contains("start") ? space.point(j.at("start").get<std::string>()) : 0;
  const FixedPointReport r = solve_sufpt(space, f, kDefaultBudget, start);
  out["outcome"] = std::string(to_string(r.outcome));
  out["fixed_point"] = r.witness ? Json(space.name(*r.witness)) : Json(nullptr);
  if (!r.violated.empty()) out["violated"] = r.violated;
  return out;
}

std::vector<std::int64_t> int_list(const Json& j) {
  if (!j.is_array()) throw schema_error("expected an array of integers, got " + j.dump());
  std::vector<std::int64_t> out;
  for (const auto& e : j) out.push_back(e.get<std::int64_t>());
  return out;
}

Json run_padic(const Json& j, ConditionReport& checks) {
  const std::uint64_t p = req(j, "p").get<std::uint64_t>();
  const unsigned N = req(j, "N").get<unsigned>();
  const std::string task = req(j, "task").get<std::string>();
  Json out;
  if (task == "hensel") {
    const HenselResult r = hensel_lift(int_list(req(j, "polynomial")), req(j, "start").get<std::int64_t>(), p, N);
    Json trace = Json::array(), prec = Json::array();
    for (const auto& s : r.trace) {
      trace.push_back(s.residue);
      prec.push_back(s.precision);
    }
    out["trace"] = trace;
    out["precisions"] = prec;
    out["root"] = r.root.residue();
  } else if (task == "fptcbs") {
    const Polynomial P = Polynomial::from_integers(int_list(req(j, "polynomial")), p, N);
    const std::int64_t shift = get_or<std::int64_t>(j, "shift", 0);
    const PAdicMap f = shifted_newton_map(P, shift);
    const ConditionReport c = check_fptcbs_hypotheses(f, p, N);
    absorb(checks, c);
    out["hypotheses"] = check_map(c);
    std::vector<std::uint64_t> reached;
    for (const PAdicInt& x0 : ideal_points(p, N)) {
      PAdicInt x = x0;
      for (std::size_t k = 0; k <= padic_modulus(p, N) && !(f(x) == x); ++k) x = f(x);
      if (!(f(x) == x)) throw Error(ErrorKind::InternalAssertion, "orbit of " + std::to_string(x0.residue()) + " does not settle");
      if (std::find(reached.begin(), reached.end(), x.residue()) == reached.end()) reached.push_back(x.residue());
    }
    out["fixed_points"] = reached;
    if (reached.size() == 1) {
      const std::uint64_t mod = padic_modulus(p, N);
      out["root"] = static_cast<std::uint64_t>((static_cast<std::int64_t>(reached.front() % mod) + shift % static_cast<std::int64_t>(mod) +
                                                static_cast<std::int64_t>(mod)) %
                                               static_cast<std::int64_t>(mod));
    }
  } else if (task == "attractor") {
    const Polynomial phi = Polynomial::from_integers(int_list(req(j, "phi")), p, N);
    const std::uint64_t target = req(j, "target").get<std::uint64_t>();
    const UltrametricSpace space = padic_ultrametric_all(p, N);
    std::vector<PointId> table;
    for (std::uint64_t r = 0; r < padic_modulus(p, N); ++r) table.push_back(phi(PAdicInt::from_residue(p, N, r)).residue());
    const PointId start = get_or<std::uint64_t>(j, "start", 0);
    const Polynomial Q = Polynomial::from_integers([&] {
      auto c = int_list(req(j, "phi"));
      if (c.empty()) c.push_back(0);
      c[0] -= static_cast<std::int64_t>(target);
      return c;
    }(), p, N);
    auto chooser = [&](PointId x) { return newton_map(Q, PAdicInt::from_residue(p, N, x)).residue(); };
    const AttractorReport r = solve_attractor(space, space, table, target, chooser, start);
    absorb(checks, r.attractor_checks);
    out["outcome"] = std::string(to_string(r.run.outcome));
    out["preimage"] = r.preimage ? Json(*r.preimage) : Json(nullptr);
    out["validated_steps"] = r.validated_steps;
  } else {
    throw schema_error("unknown padic task '" + task + "' (hensel, fptcbs, attractor)");
  }
  return out;
}

Json run_banach(const Json& j, ConditionReport& checks) {
  const AffineMap map = parse_affine(req(j, "map").get<std::string>());
  const Rational C = parse_rational(value_text(req(j, "C")));
  const std::string mode = get_or<std::string>(j, "mode", "strict");
  if (mode != "strict" && mode != "orbit-strict") throw schema_error("mode is 'strict' or 'orbit-strict'");
  const ContractionSpec spec =
      affine_spec(map, C, mode == "strict" ? ContractionSpec::Mode::Strict : ContractionSpec::Mode::OrbitStrict);
  const RationalPoint x0 = parse_point(req(j, "start").get<std::string>());
  const Rational eps = parse_rational(value_text(get_or<Json>(j, "eps", Json("1/1048576"))));
  const BanachOrbitReport orbit = verify_banach_sc(spec, x0, get_or<std::size_t>(j, "orbit_length", 8));
  absorb(checks, orbit.checks);
  const BanachResult r = solve_banach(spec, x0, eps);
  Json out;
  out["orbit_checks"] = check_map(orbit.checks);
  out["drop_index"] = orbit.drop_index;
  out["x"] = to_string(r.x);
  out["certificate_center"] = to_string(r.certificate.center);
  out["certificate_radius"] = to_string(r.certificate.radius);
  out["iterations"] = r.iterations;
  return out;
}

HahnSeries series(const Json& j) { return HahnSeries::parse(value_text(j)); }

std::vector<RationalBall> rational_balls(const Json& j) {
  std::vector<RationalBall> out;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 2) throw schema_error("order balls are [center, radius]");
    out.push_back(RationalBall{parse_rational(value_text(b[0])), parse_rational(value_text(b[1]))});
  }
  return out;
}

RationalNestStream nest_stream(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "sqrt2") return sqrt2_nest();
    throw schema_error("unknown named nest '" + j.get<std::string>() + "' (sqrt2)");
  }
  auto balls = rational_balls(j);
  return [balls](std::size_t i) -> std::optional<RationalBall> {
    if (i < balls.size()) return balls[i];
    return std::nullopt;
  };
}

Json run_ordered(const Json& j, ConditionReport& checks) {
  const std::string task = req(j, "task").get<std::string>();
  const int T = get_or<int>(j, "trunc", kDefaultTruncation);
  Json out;
  if (task == "oag") {
    const Json& m = req(j, "map");
    const SeriesMap f = affine_series_map(series(req(m, "a")), series(req(m, "b")));
    const Rational ratio = parse_rational(value_text(req(j, "ratio")));
    const OagReport r = solve_oag(f, ratio.get_num().get_si(), ratio.get_den().get_si(), series(req(j, "start")), T,
                                  get_or<std::size_t>(j, "budget", 10000));
    out["outcome"] = std::string(to_string(r.outcome));
    out["fixed_point"] = to_string(r.witness);
    out["iterations"] = r.iterations;
    out["restarts"] = r.restarts;
    Json trace = Json::array();
    for (const auto& v : r.valuation_trace) trace.push_back(to_string(v));
    out["valuations"] = trace;
  } else if (task == "asco") {
    const AscoReport r = check_asco(parse_desk_group(req(j, "group").get<std::string>()), nest_stream(req(j, "nest")),
                                    get_or<std::size_t>(j, "levels", 40));
    out["verdict"] = to_string(r.verdict);
    out["witness"] = r.witness ? Json(to_string(*r.witness)) : Json(nullptr);
    out["levels"] = r.levels_read;
    out["width"] = to_string(Rational(r.hi - r.lo));
  } else if (task == "scoscu") {
    std::vector<std::pair<HahnSeries, HahnSeries>> pairs;
    for (const auto& pr : req(j, "pairs")) {
      if (!pr.is_array() || pr.size() != 2) throw schema_error("scoscu pairs are [x, y]");
      pairs.emplace_back(series(pr[0]), series(pr[1]));
    }
    const ScoscuReport r = scoscu_transfer(pairs, T);
    absorb(checks, r.checks);
    out["checks"] = check_map(r.checks);
    Json balls = Json::array();
    for (const auto& b : r.order_nest) balls.push_back(Json::array({to_string(b.center), to_string(b.radius)}));
    out["order_nest"] = balls;
    out["probes"] = r.probes;
  } else if (task == "hybrid") {
    const CoefficientField field = parse_coefficient_field(req(j, "field").get<std::string>());
    std::vector<HybridBall> nest;
    for (const auto& b : req(j, "nest")) {
      if (b.contains("u")) {
        const Json& u = b.at("u");
        nest.emplace_back(UltrametricBall{series(u.at(0)), series(u.at(1))});
      } else if (b.contains("o")) {
        nest.emplace_back(rational_balls(Json::array({b.at("o")})).front());
      } else {
        throw schema_error("hybrid balls are {\"u\": [x, y]} or {\"o\": [q, r]}");
      }
    }
    const std::size_t budget = get_or<std::size_t>(j, "levels", 40);
    const HybridReport r = j.contains("tail") ? check_hybrid(field, nest, nest_stream(j.at("tail")), budget, T)
                                              : check_hybrid(field, nest, budget, T);
    out["cofinal"] = r.cofinal_class;
    out["nonempty"] = r.nonempty ? Json(*r.nonempty) : Json("empty-so-far");
    out["witness"] = r.witness ? Json(to_string(*r.witness)) : Json(nullptr);
    out["detail"] = r.detail;
  } else {
    throw schema_error("unknown ordered task '" + task + "' (oag, asco, scoscu, hybrid)");
  }
  return out;
}

Json run_topo(const Json& j, ConditionReport& checks) {
  std::vector<std::vector<std::string>> opens;
  for (const auto& o : req(j, "opens")) opens.push_back(string_list(o));
  const FiniteTopology top = FiniteTopology::from_names(string_list(req(j, "points")), opens);
  std::vector<PointId> table(top.size());
  std::vector<bool> seen(top.size(), false);
  for (const auto& [a, b] : map_pairs(req(j, "map"))) {
    table[top.point(a)] = top.point(b);
    seen[top.point(a)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw schema_error("\"map\" must be total");
  const SelfMap f(table);
  Json out;
  const ClosedMapVerdict closed = is_closed_map(top, f);
  out["closed_map"] = closed.closed;
  if (!closed.closed) {
    out["not_closed_witness"] = set_names(top.to_set(*closed.witness), top.names());
    return out;
  }
  const TopnReport hyp = check_topn_hypotheses(top, f);
  out["verdict"] = to_string(hyp.verdict);
  const FixedPointReport r = solve_topn(top, f);
  fixed_point_fields(out, r, top.names());
  const JLemmaReport jl = check_j_lemmas(top, f);
  absorb(checks, jl.checks);
  out["j_lemmas"] = check_map(jl.checks);
  out["top3"] = top3_hypothesis(top, f);
  return out;
}

std::string position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

const std::string* RunReport::result(const std::string& key) const {
  for (const auto& [k, v] : results)
    if (k == key) return &v;
  return nullptr;
}

RunReport run_scenario_text(const std::string& text, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, name + ": " + position(text, e.byte) + ": malformed JSON");
  }
  RunReport rep;
  rep.scenario = name;
  Json results;
  try {
    rep.kind = req(j, "kind").get<std::string>();
    if (rep.kind == "ballspace")
      results = run_ballspace(j, rep.checks);
    else if (rep.kind == "ultrametric")
      results = run_ultrametric(j, rep.checks);
    else if (rep.kind == "padic")
      results = run_padic(j, rep.checks);
    else if (rep.kind == "banach")
      results = run_banach(j, rep.checks);
    else if (rep.kind == "ordered")
      results = run_ordered(j, rep.checks);
    else if (rep.kind == "topo")
      results = run_topo(j, rep.checks);
    else
      throw schema_error("unknown kind '" + rep.kind + "' (ballspace, ultrametric, padic, banach, ordered, topo)");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, name + ": schema: " + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Parse) throw;
    const std::string msg = e.what();
    throw Error(ErrorKind::Parse, name + ": " + msg.substr(msg.find(": ") + 2));
  }
  for (const auto& [k, v] : results.items()) rep.results.emplace_back(k, v.dump());
  if (j.contains("expect")) {
    for (const auto& [k, v] : j.at("expect").items()) {
      if (!results.contains(k))
        rep.mismatches.push_back(k + ": no such result");
      else if (results.at(k) != v)
        rep.mismatches.push_back(k + ": expected " + v.dump() + ", got " + results.at(k).dump());
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RunReport run_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_scenario_text(ss.str(), path);
}

std::string format_report(const RunReport& report, bool structured) {
  if (structured) {
    Json j;
    j["scenario"] = report.scenario;
    j["kind"] = report.kind;
    Json res = Json::object();
    for (const auto& [k, v] : report.results) res[k] = Json::parse(v);
    j["results"] = res;
    j["mismatches"] = report.mismatches;
    j["seconds"] = report.seconds;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << report.scenario << " (" << report.kind << ")\n";
  for (const auto& [k, v] : report.results) os << "  " << k << ": " << v << "\n";
  for (const auto& c : report.checks.checks)
    if (c.evaluated && !c.holds) os << "  check " << c.tag << " fails" << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  for (const auto& m : report.mismatches) os << "  MISMATCH " << m << "\n";
  os << (report.mismatches.empty() ? "  ok" : "  expectation mismatch") << "\n";
  return os.str();
}

}  // namespace ballfix

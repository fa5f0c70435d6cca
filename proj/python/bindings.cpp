#include "ballfix/ball_space.hpp"
#include "ballfix/banach.hpp"
#include "ballfix/error.hpp"
#include "ballfix/ordered.hpp"
#include "ballfix/padic.hpp"
#include "ballfix/scenario.hpp"
#include "ballfix/sweep.hpp"
#include "ballfix/topology.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ballfix;

namespace {

std::vector<PointSet> to_sets(std::size_t n, const std::vector<std::vector<PointId>>& balls) {
  std::vector<PointSet> out;
  for (const auto& b : balls) {
    PointSet s(n);
    for (PointId p : b) {
      if (p >= n) throw Error(ErrorKind::Precondition, "point " + std::to_string(p) + " out of range");
      s.set(p);
    }
    out.push_back(s);
  }
  return out;
}

py::dict fixed_point_dict(const FixedPointReport& r) {
  py::dict d;
  d["outcome"] = std::string(to_string(r.outcome));
  d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
  d["violated"] = r.violated;
  std::vector<std::vector<PointId>> nest;
  for (const auto& b : r.nest.chain()) nest.push_back(members(b));
  d["nest"] = nest;
  return d;
}

py::dict sweep_dict(const SweepSummary& s) {
  py::dict d;
  d["family"] = s.family;
  d["instances"] = s.instances;
  d["counts"] = s.counts;
  d["counterexamples"] = s.counterexamples;
  d["seconds"] = s.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed point theorems for ball spaces: solvers and checkers";

  py::register_exception<Error>(m, "BallfixError", PyExc_ValueError);

  m.def(
      "solve_ball_space",
      [](std::size_t n, const std::vector<std::vector<PointId>>& balls, const std::vector<PointId>& table,
         const std::string& solver) {
        const BallSpace space = BallSpace::unnamed(n, to_sets(n, balls));
        const SelfMap f(table);
        f.check_against(space);
        if (solver == "nfpt1") return fixed_point_dict(solve_nfpt1(space, f));
        if (solver == "nfpt2") return fixed_point_dict(solve_nfpt2(space, f));
        throw Error(ErrorKind::Parse, "solver must be nfpt1 or nfpt2");
      },
      py::arg("n"), py::arg("balls"), py::arg("table"), py::arg("solver") = "nfpt1");

  m.def(
      "conditions",
      [](std::size_t n, const std::vector<std::vector<PointId>>& balls, const std::vector<PointId>& table) {
        const BallSpace space = BallSpace::unnamed(n, to_sets(n, balls));
        const SelfMap f(table);
        std::map<std::string, bool> out;
        for (const auto& c : check_c_conditions(space, f).checks) out[c.tag] = c.holds;
        for (const auto& c : check_cu_conditions(space, f).checks) out[c.tag] = c.holds;
        return out;
      },
      py::arg("n"), py::arg("balls"), py::arg("table"));

  m.def(
      "hensel_lift",
      [](const std::vector<std::int64_t>& coefficients, std::int64_t x0, std::uint64_t p, unsigned N) {
        const HenselResult r = hensel_lift(coefficients, x0, p, N);
        std::vector<std::pair<std::uint64_t, unsigned>> trace;
        for (const auto& s : r.trace) trace.emplace_back(s.residue, s.precision);
        py::dict d;
        d["root"] = r.root.residue();
        d["trace"] = trace;
        return d;
      },
      py::arg("coefficients"), py::arg("x0"), py::arg("p"), py::arg("N"));

  m.def(
      "solve_banach",
      [](const std::string& map, const std::string& C, const std::string& x0, const std::string& eps) {
        const BanachResult r = solve_banach(affine_spec(parse_affine(map), parse_rational(C)), parse_point(x0),
                                            parse_rational(eps));
        std::vector<std::string> x, center;
        for (const auto& q : r.x.coords) x.push_back(to_string(q));
        for (const auto& q : r.certificate.center.coords) center.push_back(to_string(q));
        py::dict d;
        d["x"] = x;
        d["center"] = center;
        d["radius"] = to_string(r.certificate.radius);
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("map"), py::arg("C"), py::arg("x0"), py::arg("eps"));

  m.def(
      "solve_oag",
      [](const std::string& a, const std::string& b, long num, long den, const std::string& x0, int T) {
        const OagReport r = solve_oag(affine_series_map(HahnSeries::parse(a), HahnSeries::parse(b)), num, den,
                                      HahnSeries::parse(x0), T);
        py::dict d;
        d["outcome"] = std::string(to_string(r.outcome));
        d["witness"] = to_string(r.witness);
        d["iterations"] = r.iterations;
        d["restarts"] = r.restarts;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("m"), py::arg("n"), py::arg("x0") = "0", py::arg("T") = kDefaultTruncation);

  m.def(
      "check_topn",
      [](std::size_t n, const std::vector<Mask>& opens, const std::vector<PointId>& table) {
        const FiniteTopology top(n, opens);
        const SelfMap f(table);
        py::dict d;
        d["verdict"] = to_string(check_topn_hypotheses(top, f).verdict);
        d["solution"] = fixed_point_dict(solve_topn(top, f));
        return d;
      },
      py::arg("n"), py::arg("opens"), py::arg("table"));

  m.def(
      "run_scenario",
      [](const std::string& path) {
        const RunReport r = run_scenario_file(path);
        py::dict d;
        d["kind"] = r.kind;
        d["results"] = r.results;
        d["mismatches"] = r.mismatches;
        d["exit_code"] = r.exit_code();
        return d;
      },
      py::arg("path"));

  m.def(
      "sweep",
      [](const std::string& family, std::size_t max_points, std::size_t max_balls, std::size_t jobs) {
        return sweep_dict(run_sweep(family, max_points, max_balls, jobs));
      },
      py::arg("family"), py::arg("max_points") = 3, py::arg("max_balls") = 5, py::arg("jobs") = 1);
}

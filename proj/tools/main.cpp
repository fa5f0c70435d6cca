// ballfix: scenario runner, solvers and exhaustive sweeps.
//
// Exit status: 0 success, 1 expectation mismatch, 2 input error,
// 3 internal assertion (a solver contradicted a theorem).

#include "ballfix/banach.hpp"
#include "ballfix/ordered.hpp"
#include "ballfix/padic.hpp"
#include "ballfix/scenario.hpp"
#include "ballfix/sweep.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <iostream>
#include <sstream>

namespace {

using Json = nlohmann::ordered_json;
using namespace ballfix;

struct Globals {
  std::uint64_t seed = 20240611;
  std::string format = "human";
  std::size_t jobs = 1;

  bool structured() const { return format == "structured"; }
};

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "'" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty coefficient list");
  return out;
}

void emit(const Globals& g, const Json& j) {
  if (g.structured()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

int run_verify(const Globals& g, const std::vector<std::string>& paths) {
  int status = 0;
  for (const auto& path : paths) {
    const RunReport r = run_scenario_file(path);
    std::cout << format_report(r, g.structured());
    status = std::max(status, r.exit_code());
  }
  return status;
}

int run_hensel(const Globals& g, std::uint64_t p, unsigned N, const std::string& poly, std::int64_t start) {
  const HenselResult r = hensel_lift(parse_int_list(poly), start, p, N);
  Json j;
  Json trace = Json::array();
  for (const auto& s : r.trace) trace.push_back(Json{{"precision", s.precision}, {"residue", s.residue}});
  j["trace"] = trace;
  j["root"] = r.root.residue();
  j["modulus"] = r.root.modulus();
  if (!g.structured()) {
    for (const auto& s : r.trace) std::cout << s.residue << " mod " << p << "^" << s.precision << "\n";
    std::cout << "root " << r.root.residue() << " mod " << r.root.modulus() << "\n";
    return 0;
  }
  emit(g, j);
  return 0;
}

int run_banach(const Globals& g, const std::string& map, const std::string& C, const std::string& start,
               const std::string& eps, const std::string& mode) {
  const ContractionSpec spec = affine_spec(parse_affine(map), parse_rational(C),
                                           mode == "orbit-strict" ? ContractionSpec::Mode::OrbitStrict
                                                                  : ContractionSpec::Mode::Strict);
  const BanachResult r = solve_banach(spec, parse_point(start), parse_rational(eps));
  Json j;
  j["x"] = to_string(r.x);
  j["certificate_center"] = to_string(r.certificate.center);
  j["certificate_radius"] = to_string(r.certificate.radius);
  j["iterations"] = r.iterations;
  emit(g, j);
  return 0;
}

int run_oag(const Globals& g, const std::string& map, const std::string& ratio, const std::string& start, int T) {
  const std::string prefix = "affine:";
  if (map.rfind(prefix, 0) != 0 || map.find(',') == std::string::npos)
    throw Error(ErrorKind::Parse, "--map expects affine:a,b for x -> a x + b");
  const std::string body = map.substr(prefix.size());
  const std::size_t comma = body.find(',');
  const SeriesMap f = affine_series_map(HahnSeries::parse(body.substr(0, comma)), HahnSeries::parse(body.substr(comma + 1)));
  const Rational q = parse_rational(ratio);
  const OagReport r = solve_oag(f, q.get_num().get_si(), q.get_den().get_si(), HahnSeries::parse(start), T);
  Json j;
  j["outcome"] = std::string(to_string(r.outcome));
  j["fixed_point"] = to_string(r.witness);
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["truncation"] = T;
  emit(g, j);
  return r.outcome == Outcome::FixedPointFound || r.outcome == Outcome::CertificateReached ? 0 : 1;
}

int run_sweep_cmd(const Globals& g, const std::string& family, std::size_t max_points, std::size_t max_balls) {
  const SweepSummary s = run_sweep(family, max_points, max_balls, g.jobs);
  if (g.structured()) {
    Json j;
    j["family"] = s.family;
    j["instances"] = s.instances;
    j["counts"] = s.counts;
    j["counterexamples"] = s.counterexamples;
    j["seconds"] = s.seconds;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_summary(s);
  }
  return s.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ballfix: fixed points on ball spaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for randomized runs")->capture_default_str();
  app.add_option("--format", g.format, "human or structured")->check(CLI::IsMember({"human", "structured"}))->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<std::string> scenarios;
  auto* verify = app.add_subcommand("verify", "run scenario files");
  verify->add_option("--scenario,scenario", scenarios, "scenario file")->required()->check(CLI::ExistingFile);

  std::uint64_t prime = 7;
  unsigned precision = 3;
  std::string poly = "-2,0,1";
  std::int64_t hstart = 3;
  auto* hensel = app.add_subcommand("hensel", "lift a simple root mod p to mod p^N");
  hensel->add_option("--prime", prime)->capture_default_str();
  hensel->add_option("--precision", precision)->capture_default_str();
  hensel->add_option("--poly", poly, "coefficients c0,c1,...,ck")->capture_default_str();
  hensel->add_option("--start", hstart)->capture_default_str();

  std::string bmap, bC = "1/2", bstart, beps = "1/1048576", bmode = "strict";
  auto* banach = app.add_subcommand("banach", "iterate an affine contraction to a certificate ball");
  banach->add_option("--map", bmap, "rows 'a11,...,a1n,b1;...'")->required();
  banach->add_option("--C", bC)->capture_default_str();
  banach->add_option("--start", bstart)->required();
  banach->add_option("--eps", beps)->capture_default_str();
  banach->add_option("--mode", bmode)->check(CLI::IsMember({"strict", "orbit-strict"}))->capture_default_str();

  std::string omap, oratio = "1/2", ostart = "0";
  int trunc = kDefaultTruncation;
  auto* oag = app.add_subcommand("oag", "orbit solver over truncated series");
  oag->add_option("--map", omap, "affine:a,b")->required();
  oag->add_option("--ratio", oratio)->capture_default_str();
  oag->add_option("--start", ostart)->capture_default_str();
  oag->add_option("--trunc", trunc)->capture_default_str();

  std::size_t topo_points = 3;
  auto* topo = app.add_subcommand("topo", "finite topologies");
  topo->require_subcommand(1);
  auto* topo_sweep = topo->add_subcommand("sweep", "all closed self-maps of small topologies");
  topo_sweep->add_option("--max-points", topo_points)->capture_default_str();

  std::string family = "nfpt";
  std::size_t max_points = 3, max_balls = 5;
  auto* sweep = app.add_subcommand("sweep", "exhaustive theorem sweeps");
  sweep->add_option("--family", family)->check(CLI::IsMember({"nfpt", "gfpt", "topo"}))->capture_default_str();
  sweep->add_option("--max-points", max_points)->capture_default_str();
  sweep->add_option("--max-balls", max_balls)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return run_verify(g, scenarios);
    if (*hensel) return run_hensel(g, prime, precision, poly, hstart);
    if (*banach) return run_banach(g, bmap, bC, bstart, beps, bmode);
    if (*oag) return run_oag(g, omap, oratio, ostart, trunc);
    if (*topo_sweep) return run_sweep_cmd(g, "topo", topo_points, 0);
    if (*sweep) return run_sweep_cmd(g, family, max_points, max_balls);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InternalAssertion ? 3 : 2;
  }
  return 2;
}

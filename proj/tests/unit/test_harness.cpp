#include "ballfix/error.hpp"
#include "ballfix/scenario.hpp"
#include "ballfix/sweep.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

using namespace ballfix;

namespace {

const char* kThreePoint = R"({
  "kind": "ballspace",
  "points": ["a", "b", "c"],
  "balls": [["a", "b", "c"], ["b", "c"], ["c"]],
  "map": {"a": "b", "b": "c", "c": "c"},
  "solver": "nfpt1",
  "expect": {"fixed_point": "c"}
})";

}  // namespace

TEST(Scenario, BundledFilesPass) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(BALLFIX_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const RunReport r = run_scenario_file(entry.path().string());
    EXPECT_EQ(r.exit_code(), 0) << entry.path() << "\n" << format_report(r, false);
  }
  EXPECT_GE(count, 10u);
}

TEST(Scenario, ThreePointFixedPoint) {
  const RunReport r = run_scenario_text(kThreePoint);
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_NE(r.result("fixed_point"), nullptr);
  EXPECT_EQ(*r.result("fixed_point"), "\"c\"");
}

TEST(Scenario, HenselTrace) {
  const RunReport r = run_scenario_file(std::string(BALLFIX_SCENARIO_DIR) + "/hensel_sqrt2.json");
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_NE(r.result("trace"), nullptr);
  EXPECT_EQ(*r.result("trace"), "[3,10,108]");
}

TEST(Scenario, MalformedReportsPosition) {
  try {
    run_scenario_text("{\n  \"kind\": \"ballspace\"\n  \"points\": []\n}");
    FAIL() << "expected parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Scenario, SchemaErrors) {
  EXPECT_THROW(run_scenario_text(R"({"kind": "nothing"})"), Error);
  EXPECT_THROW(run_scenario_text(R"({"points": ["a"]})"), Error);
  EXPECT_THROW(run_scenario_file("/nonexistent/scenario.json"), Error);
}

TEST(Scenario, MismatchListed) {
  std::string text = kThreePoint;
  text.replace(text.find("\"fixed_point\": \"c\""), 18, "\"fixed_point\": \"a\"");
  const RunReport r = run_scenario_text(text);
  EXPECT_EQ(r.exit_code(), 1);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_NE(r.mismatches.front().find("fixed_point"), std::string::npos);
}

TEST(Scenario, ReportsAreDeterministic) {
  const RunReport a = run_scenario_text(kThreePoint);
  const RunReport b = run_scenario_text(kThreePoint);
  EXPECT_EQ(a.results, b.results);
  // timings aside
  const std::regex seconds("\"seconds\": [^\\n]*");
  EXPECT_EQ(std::regex_replace(format_report(a, true), seconds, ""), std::regex_replace(format_report(b, true), seconds, ""));
}

TEST(Sweep, BoundsEnforced) {
  EXPECT_THROW(run_sweep("nfpt", kMaxNfptSweepPoints + 1, 3, 1), Error);
  EXPECT_THROW(run_sweep("gfpt", kMaxGfptSweepPoints + 1, 0, 1), Error);
  EXPECT_THROW(run_sweep("topo", kMaxTopoSweepPoints + 1, 0, 1), Error);
  try {
    run_sweep("other", 2, 2, 1);
    FAIL() << "expected parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
}

TEST(Sweep, SmallSweepsHaveNoCounterexamples) {
  const SweepSummary n = run_sweep("nfpt", 2, 3, 1);
  EXPECT_TRUE(n.ok());
  EXPECT_GT(n.instances, 0u);
  const SweepSummary g = run_sweep("gfpt", 2, 0, 1);
  EXPECT_TRUE(g.ok());
  const SweepSummary t = run_sweep("topo", 2, 0, 1);
  EXPECT_TRUE(t.ok());
  EXPECT_NE(format_summary(t).find("topo"), std::string::npos);
}

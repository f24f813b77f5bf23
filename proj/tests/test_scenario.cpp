#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "provsim/scenario.hpp"
#include "provsim/sim_core.hpp"

using namespace provsim;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("scenario loader reads every provider knob") {
  Scenario scn = load_scenario("data/baseline_dynamic.scn");
  CHECK(scn.name == "baseline_dynamic");
  CHECK(scn.window_ms == 1'209'600'000);
  CHECK(scn.speedup == 1000);
  CHECK(scn.baseline_path.find("baseline_dedicated.scn") != std::string::npos);
  REQUIRE(scn.providers.size() == 3);

  const ProviderSpec& nasa = scn.providers[0];
  CHECK(nasa.name == "nasa");
  CHECK(nasa.policy.regime == Regime::Dynamic);
  CHECK(nasa.policy.initial_nodes == 40);
  CHECK(nasa.policy.threshold_milli == 1500);
  CHECK(nasa.policy.check_cycle_ms == 60'000);
  CHECK(nasa.policy.lease_unit_ms == 3'600'000);
  CHECK(nasa.scheduler_cycle_ms == 60'000);  // batch default
  CHECK(nasa.trace.kind == WorkloadKind::HTC);
  CHECK(nasa.trace.jobs.size() == 2604);
  CHECK(nasa.trace.duration_ms == 1'209'600'000);

  const ProviderSpec& montage = scn.providers[2];
  CHECK(montage.scheduler_cycle_ms == 1'000);
  CHECK(montage.trace.kind == WorkloadKind::MTC);
  CHECK(montage.trace.repetition.mode == RepetitionMode::Interval);
  CHECK(montage.trace.repetition.interval_ms == 17'500'000);
}

TEST_CASE("scenario loader rejects malformed files") {
  auto p = write_temp("bad1.scn", "name = x\nwarp = 9\n");
  CHECK_THROWS_AS(load_scenario(p.string()), ParseError);
  p = write_temp("bad2.scn",
                 "window = 100\n[provider]\nname = a\ntrace = nope.swf\n");
  CHECK_THROWS_AS(load_scenario(p.string()), SimError);  // missing trace file
  p = write_temp("bad3.scn", "window = -5\n");
  CHECK_THROWS_AS(load_scenario(p.string()), SimError);
  p = write_temp("bad4.scn", "speedup = 2.5\n");
  CHECK_THROWS_AS(load_scenario(p.string()), SimError);  // not an integer
  p = write_temp("bad5.scn", "name = x\n");
  CHECK_THROWS_AS(load_scenario(p.string()), SimError);  // no providers
  std::filesystem::remove(std::filesystem::temp_directory_path() / "bad1.scn");
}

TEST_CASE("duplicate provider names are rejected") {
  std::filesystem::path dir = std::filesystem::temp_directory_path();
  write_temp("dup_trace.swf", "1 0 0 10 1 -1 -1 1 -1\n");
  auto p = write_temp("dup.scn",
                      "window = 3600\n"
                      "speedup = 1\n"
                      "[provider]\nname = a\ntrace = dup_trace.swf\n"
                      "[provider]\nname = a\ntrace = dup_trace.swf\n");
  CHECK_THROWS_AS(load_scenario(p.string()), SimError);
  std::filesystem::remove(dir / "dup.scn");
  std::filesystem::remove(dir / "dup_trace.swf");
}

TEST_CASE("the window must be divisible by the speedup") {
  Scenario scn;
  scn.window_ms = 100;
  scn.speedup = 7;
  ProviderSpec p;
  p.name = "w";
  p.trace.kind = WorkloadKind::HTC;
  p.trace.jobs.push_back({1, 0, 10, 1});
  p.policy.regime = Regime::Static;
  p.policy.initial_nodes = 1;
  p.scheduler_cycle_ms = 7;
  scn.providers.push_back(p);
  CHECK_THROWS_AS(run_scenario(scn), SimError);
}

TEST_CASE("dedicated baseline reproduces its frozen report") {
  MetricsReport rep = run_scenario_with_baseline(
      load_scenario("data/baseline_dedicated.scn"));
  CHECK(rep.provider("nasa").rc_node_ms == 43'008LL * kMsPerHour);
  CHECK(rep.provider("blue").rc_node_ms == 48'384LL * kMsPerHour);
  CHECK(rep.provider("montage").rc_node_ms == 55'776LL * kMsPerHour);
  CHECK(rep.trc_node_ms == 147'168LL * kMsPerHour);
  CHECK(rep.peak_nodes == 438);
  CHECK(rep.adjustment_count == 0);
  CHECK(rep.overhead_node_ms == 0);
  CHECK(rep.provider("nasa").completed_jobs == 2603);
  CHECK(rep.provider("nasa").unfinished_jobs == 1);
  CHECK(rep.provider("blue").completed_jobs == 2649);
  CHECK(rep.provider("blue").unfinished_jobs == 17);
  CHECK(rep.provider("montage").completed_jobs == 70'000);
  CHECK(rep.provider("montage").tasks_per_second ==
        doctest::Approx(1000.0 / 407.0));
}

TEST_CASE("fixed-lease baseline matches dedicated consumption") {
  MetricsReport rep = run_scenario_with_baseline(
      load_scenario("data/baseline_fixed.scn"));
  CHECK(rep.trc_node_ms == 147'168LL * kMsPerHour);
  CHECK(rep.adjustment_count == 6);
  CHECK(rep.overhead_node_ms == 876 * kAdjustCostMsPerNode);
  CHECK(rep.total_saved_pct == doctest::Approx(0.0));
}

TEST_CASE("dynamic baseline reproduces its frozen report") {
  MetricsReport rep = run_scenario_with_baseline(
      load_scenario("data/baseline_dynamic.scn"));
  CHECK(rep.provider("nasa").rc_node_ms == 30'223LL * kMsPerHour);
  CHECK(rep.provider("blue").rc_node_ms == 30'409LL * kMsPerHour);
  CHECK(rep.provider("montage").rc_node_ms == 16'940LL * kMsPerHour);
  CHECK(rep.trc_node_ms == 77'572LL * kMsPerHour);
  CHECK(rep.total_saved_pct == doctest::Approx(47.290).epsilon(0.001));
  CHECK(rep.provider("nasa").saved_pct ==
        doctest::Approx(29.727).epsilon(0.001));
  CHECK(rep.provider("blue").saved_pct ==
        doctest::Approx(37.151).epsilon(0.001));
  CHECK(rep.provider("montage").saved_pct ==
        doctest::Approx(69.629).epsilon(0.001));
  CHECK(rep.peak_nodes == 705);
  CHECK(rep.adjustment_count == 204);
  CHECK(rep.provider("nasa").adjustments == 31);
  CHECK(rep.provider("blue").adjustments == 32);
  CHECK(rep.provider("montage").adjustments == 141);
  CHECK(rep.overhead_node_ms == 29'368 * kAdjustCostMsPerNode);
  CHECK(rep.provider("nasa").completed_jobs == 2603);
  CHECK(rep.provider("blue").completed_jobs == 2657);
  CHECK(rep.provider("montage").completed_jobs == 70'000);
  CHECK(rep.provider("montage").tasks_per_second ==
        doctest::Approx(1000.0 / 407.0));
}

TEST_CASE("per-job baseline reproduces its frozen report") {
  MetricsReport rep = run_scenario_with_baseline(
      load_scenario("data/baseline_perjob.scn"));
  CHECK(rep.provider("nasa").rc_node_ms == 48'720LL * kMsPerHour);
  CHECK(rep.provider("blue").rc_node_ms == 32'893LL * kMsPerHour);
  CHECK(rep.provider("montage").rc_node_ms == 70'000LL * kMsPerHour);
  CHECK(rep.trc_node_ms == 151'613LL * kMsPerHour);
  CHECK(rep.peak_nodes == 1532);
  CHECK(rep.adjustment_count == 150'540);
  CHECK(rep.provider("blue").completed_jobs == 2657);
  CHECK(rep.provider("montage").tasks_per_second ==
        doctest::Approx(1000.0 / 373.0));
}

TEST_CASE("equivalence check passes on the shared-cluster trace") {
  Scenario scn = load_scenario("data/baseline_dedicated.scn");
  Conf1Result res = check_conf1_equivalence(
      scn.providers[1].trace, 144, scn.window_ms, scn.speedup,
      scn.providers[1].scheduler_cycle_ms, 3'600'000);
  CHECK(res.pass);
  CHECK(res.divergence.empty());
}

TEST_CASE("dominance holds for the shipped dynamic configuration") {
  DominanceResult res =
      check_dominance(load_scenario("data/baseline_dynamic.scn"));
  CHECK(res.pass);
}

TEST_CASE("dominance fails when consumption regresses") {
  Scenario scn = load_scenario("data/baseline_dedicated.scn");
  scn.baseline_path = "data/baseline_dynamic.scn";
  DominanceResult res = check_dominance(scn);
  CHECK_FALSE(res.pass);
  CHECK(res.detail.find("regressed") != std::string::npos);
}

TEST_CASE("sweep grids load and the sweep hits the baseline point") {
  SweepSpec grid = load_sweep_spec("data/grid_htc.txt");
  CHECK(grid.b_list ==
        std::vector<int64_t>{0, 20, 40, 64, 80, 100, 128});
  CHECK(grid.r_milli_list ==
        std::vector<int64_t>{1500, 2000, 4000, 100'000});
  CHECK(grid.s_list_ms == std::vector<int64_t>{60'000});
  CHECK(grid.c_list_ms ==
        std::vector<int64_t>{1'800'000, 3'600'000, 7'200'000});

  auto p = write_temp("grid_inf.txt", "b = 5\nr = inf\n");
  SweepSpec inf_grid = load_sweep_spec(p.string());
  CHECK(inf_grid.r_milli_list == std::vector<int64_t>{-1});
  std::filesystem::remove(p);

  Scenario scn = load_scenario("data/sweep_montage.scn");
  SweepSpec point;
  point.b_list = {20};
  point.r_milli_list = {8000};
  point.s_list_ms = {1000};
  point.c_list_ms = {3'600'000};
  std::vector<SweepPoint> pts = run_sweep(scn, point);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].report.provider("montage").rc_node_ms ==
        16'940LL * kMsPerHour);
  std::string csv = sweep_to_csv(pts);
  CHECK(csv.find("b,r,s_s,c_s,provider,") != std::string::npos);
  CHECK(csv.find("20,8,1,3600,montage,") != std::string::npos);
}

TEST_CASE("sweeping a scenario without dynamic providers is an error") {
  Scenario scn = load_scenario("data/baseline_dedicated.scn");
  SweepSpec point;
  point.b_list = {1};
  point.r_milli_list = {1500};
  point.s_list_ms = {1000};
  point.c_list_ms = {3'600'000};
  CHECK_THROWS_AS(run_sweep(scn, point), SimError);
}

TEST_CASE("reports write one csv per scenario") {
  Scenario scn = load_scenario("data/baseline_dedicated.scn");
  MetricsReport rep = run_scenario(scn);
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "provsim_report_test";
  write_reports({rep}, dir.string());
  std::ifstream in(dir / "baseline_dedicated.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("scenario,provider") == 0);
  std::filesystem::remove_all(dir);
}

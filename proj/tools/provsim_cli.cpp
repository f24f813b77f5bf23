#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "provsim/metrics.hpp"
#include "provsim/scenario.hpp"
#include "provsim/trace.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
  provsim::Scenario scn = provsim::load_scenario(scenario_path);
  provsim::MetricsReport report = provsim::run_scenario_with_baseline(scn);
  std::cout << provsim::report_to_csv(report);
  if (!out_dir.empty()) provsim::write_reports({report}, out_dir);
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& grid_path,
              const std::string& out_file) {
  provsim::Scenario scn = provsim::load_scenario(scenario_path);
  provsim::SweepSpec spec = provsim::load_sweep_spec(grid_path);
  std::vector<provsim::SweepPoint> points = provsim::run_sweep(scn, spec);
  std::string csv = provsim::sweep_to_csv(points);
  std::cout << csv;
  if (!out_file.empty()) {
    std::ofstream out(out_file);
    if (!out) throw provsim::SimError("cannot write " + out_file);
    out << csv;
  }
  return 0;
}

int cmd_check_conf1(const std::string& scenario_path) {
  provsim::Scenario scn = provsim::load_scenario(scenario_path);
  bool all_pass = true;
  for (const provsim::ProviderSpec& p : scn.providers) {
    int64_t lr = std::max<int64_t>(p.policy.initial_nodes,
                                   p.trace.max_demand);
    provsim::Conf1Result res = provsim::check_conf1_equivalence(
        p.trace, lr, scn.window_ms, scn.speedup, p.scheduler_cycle_ms,
        p.policy.lease_unit_ms);
    if (res.pass) {
      std::printf("conf1 %s pass (capacity %lld)\n", p.name.c_str(),
                  static_cast<long long>(lr));
    } else {
      std::printf("conf1 %s fail: %s\n", p.name.c_str(),
                  res.divergence.c_str());
      all_pass = false;
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_check_dominance(const std::string& scenario_path) {
  provsim::Scenario scn = provsim::load_scenario(scenario_path);
  provsim::DominanceResult res = provsim::check_dominance(scn);
  std::printf("dominance %s: %s\n", res.pass ? "pass" : "fail",
              res.detail.c_str());
  return res.pass ? 0 : 1;
}

int cmd_tco(const std::string& path) {
  provsim::TcoInputs in = provsim::load_tco_inputs(path);
  double dedicated = provsim::tco_dedicated(in);
  double leased = provsim::tco_leased(in);
  std::printf("dedicated_per_month,%.6g\n", dedicated);
  std::printf("leased_per_month,%.6g\n", leased);
  if (dedicated > 0) {
    std::printf("leased_vs_dedicated_pct,%.2f\n", leased * 100.0 / dedicated);
  }
  return 0;
}

int cmd_validate(const std::string& path, std::string kind) {
  if (kind.empty()) {
    if (path.size() > 4 && path.rfind(".swf") == path.size() - 4) {
      kind = "swf";
    } else if (path.size() > 3 && path.rfind(".wf") == path.size() - 3) {
      kind = "wf";
    } else {
      std::fprintf(stderr, "cannot infer trace kind, pass --kind swf|wf\n");
      return 1;
    }
  }
  provsim::WorkloadTrace trace = kind == "swf"
                                     ? provsim::parse_swf_file(path)
                                     : provsim::parse_workflow_file(path);
  std::vector<std::string> diags = provsim::validate_trace(trace);
  for (const std::string& d : diags) std::printf("%s\n", d.c_str());
  if (!diags.empty()) return 1;
  std::printf("ok: %zu records, max demand %d, %d skipped\n",
              trace.job_count(), trace.max_demand, trace.skipped_records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trace-driven provisioning regime simulator"};
  app.require_subcommand(1);

  std::string scenario_path, grid_path, out_path, trace_path, tco_path, kind;

  CLI::App* run = app.add_subcommand("run", "run a scenario, CSV to stdout");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_path, "also write the report under DIR");

  CLI::App* sweep =
      app.add_subcommand("sweep", "run a B/R/S/C parameter sweep");
  sweep->add_option("scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--grid", grid_path, "grid file")->required();
  sweep->add_option("--out", out_path, "also write the CSV to FILE");

  CLI::App* check = app.add_subcommand("check", "consistency checks");
  check->require_subcommand(1);
  CLI::App* conf1 = check->add_subcommand(
      "conf1", "wide static capacity vs dynamic with an infinite threshold");
  conf1->add_option("scenario", scenario_path, "scenario file")->required();
  CLI::App* dominance = check->add_subcommand(
      "dominance", "dynamic must not consume more than its baseline");
  dominance->add_option("scenario", scenario_path, "scenario file")
      ->required();

  CLI::App* tco = app.add_subcommand("tco", "monthly cost comparison");
  tco->add_option("file", tco_path, "cost input file")->required();

  CLI::App* validate = app.add_subcommand("validate", "check a trace file");
  validate->add_option("trace", trace_path, "trace file")->required();
  validate->add_option("--kind", kind, "swf or wf");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, out_path);
    if (sweep->parsed()) return cmd_sweep(scenario_path, grid_path, out_path);
    if (check->parsed()) {
      if (conf1->parsed()) return cmd_check_conf1(scenario_path);
      return cmd_check_dominance(scenario_path);
    }
    if (tco->parsed()) return cmd_tco(tco_path);
    if (validate->parsed()) return cmd_validate(trace_path, kind);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

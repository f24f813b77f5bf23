#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "provsim/elasticity.hpp"
#include "provsim/metrics.hpp"
#include "provsim/runtime.hpp"
#include "provsim/trace.hpp"

namespace provsim {

// One service provider in a scenario: a workload bound to a policy.
struct ProviderSpec {
  std::string name;
  std::string trace_path;
  WorkloadTrace trace;  // windowed, repetition applied
  ElasticityPolicy policy;
  int64_t scheduler_cycle_ms = 0;  // defaulted by kind when absent
};

struct Scenario {
  std::string name;
  int64_t window_ms = 14LL * 24 * 3600 * 1000;
  int64_t speedup = 1000;
  std::string baseline_path;  // optional scenario to compute saved% against
  std::vector<ProviderSpec> providers;
};

// Flat key/value + [provider] sections; unknown keys are rejected.
// Trace paths resolve relative to the scenario file's directory.
Scenario load_scenario(const std::string& path);

// Per-run artifacts beyond the metrics report.
struct RunOutput {
  MetricsReport report;
  std::vector<std::vector<JobOutcome>> outcomes;  // per provider
  std::vector<std::string> dispatch_log;          // filled when requested
};

MetricsReport run_scenario(const Scenario& scenario,
                           const MetricsReport* baseline = nullptr);
RunOutput run_scenario_full(const Scenario& scenario,
                            const MetricsReport* baseline = nullptr,
                            bool keep_dispatch_log = false);

// Runs scenario.baseline_path first (when set) and applies it as baseline.
MetricsReport run_scenario_with_baseline(const Scenario& scenario);

// Cartesian B x R x S x C sweep over every dynamic provider in the scenario.
struct SweepSpec {
  std::vector<int64_t> b_list;
  std::vector<int64_t> r_milli_list;  // threshold ratio in thousandths
  std::vector<int64_t> s_list_ms;
  std::vector<int64_t> c_list_ms;
};

SweepSpec load_sweep_spec(const std::string& path);

struct SweepPoint {
  int64_t b = 0;
  int64_t r_milli = 0;
  int64_t s_ms = 0;
  int64_t c_ms = 0;
  MetricsReport report;
};

std::vector<SweepPoint> run_sweep(const Scenario& scenario,
                                  const SweepSpec& spec);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

// Equivalence check: dynamic regime with B = lr and R = +inf must match the
// static regime with capacity lr exactly (consumption, completion counts,
// throughput, and every per-job completion time).
struct Conf1Result {
  bool pass = false;
  std::string divergence;  // first difference found, empty when pass
};

Conf1Result check_conf1_equivalence(const WorkloadTrace& trace, int64_t lr,
                                    int64_t window_ms, int64_t speedup,
                                    int64_t scheduler_cycle_ms,
                                    int64_t lease_unit_ms);

// Dominance check: the scenario's dynamic configuration must consume no more
// than its baseline while completing at least as much work per provider.
struct DominanceResult {
  bool pass = false;
  std::string detail;
};

DominanceResult check_dominance(const Scenario& scenario);

void write_reports(const std::vector<MetricsReport>& reports,
                   const std::string& out_dir);

}  // namespace provsim

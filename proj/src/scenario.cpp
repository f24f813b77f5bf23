#include "provsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

namespace provsim {

namespace {

constexpr int64_t kDefaultHtcCycleMs = 60'000;
constexpr int64_t kDefaultMtcCycleMs = 1'000;

void strip_comment_and_trim(std::string* line) {
  auto hash = line->find('#');
  if (hash != std::string::npos) line->erase(hash);
  while (!line->empty() &&
         (line->back() == ' ' || line->back() == '\t' || line->back() == '\r')) {
    line->pop_back();
  }
  size_t b = line->find_first_not_of(" \t");
  line->erase(0, b == std::string::npos ? line->size() : b);
}

// Integral config value; rejects fractions so unit slips surface early.
int64_t parse_int_exact(const std::string& value, const std::string& key) {
  int64_t micro = parse_micro(value);
  if (micro % 1'000'000 != 0) {
    throw SimError("key '" + key + "' must be an integer, got '" + value +
                   "'");
  }
  return micro / 1'000'000;
}

std::string resolve_relative(const std::string& base_file,
                             const std::string& rel) {
  if (!rel.empty() && rel.front() == '/') return rel;
  std::filesystem::path dir =
      std::filesystem::path(base_file).parent_path();
  return (dir / rel).string();
}

struct RawProvider {
  std::string name;
  std::string trace;
  std::string kind;
  std::string regime = "static";
  int64_t b = 0;
  std::string r = "1.5";
  int64_t s_s = 60;
  int64_t c_s = 3600;
  int64_t cycle_s = -1;
  int64_t window_start_s = 0;
  std::string repeat = "none";
};

ElasticityPolicy policy_from_raw(const RawProvider& raw) {
  ElasticityPolicy policy;
  bool leased = false;
  std::optional<Regime> regime = parse_regime(raw.regime, &leased);
  if (!regime) {
    throw SimError("provider '" + raw.name + "': unknown regime '" +
                   raw.regime + "'");
  }
  policy.regime = *regime;
  policy.leased = leased;
  policy.initial_nodes = static_cast<int>(raw.b);
  if (raw.r == "inf" || raw.r == "infinite") {
    policy.threshold_infinite = true;
  } else {
    policy.threshold_infinite = false;
    policy.threshold_milli = parse_micro(raw.r) / 1000;
  }
  policy.check_cycle_ms = raw.s_s * kMsPerSecond;
  policy.lease_unit_ms = raw.c_s * kMsPerSecond;
  std::string bad = policy.validate();
  if (!bad.empty()) {
    throw SimError("provider '" + raw.name + "': " + bad);
  }
  return policy;
}

ProviderSpec build_provider(const RawProvider& raw,
                            const std::string& scenario_path,
                            int64_t window_ms) {
  if (raw.name.empty()) throw SimError("provider without a name");
  if (raw.trace.empty()) {
    throw SimError("provider '" + raw.name + "' has no trace");
  }
  ProviderSpec spec;
  spec.name = raw.name;
  spec.trace_path = resolve_relative(scenario_path, raw.trace);

  std::string kind = raw.kind;
  if (kind.empty()) {
    if (spec.trace_path.size() > 4 &&
        spec.trace_path.rfind(".swf") == spec.trace_path.size() - 4) {
      kind = "htc";
    } else if (spec.trace_path.size() > 3 &&
               spec.trace_path.rfind(".wf") == spec.trace_path.size() - 3) {
      kind = "mtc";
    } else {
      throw SimError("provider '" + raw.name +
                     "': cannot infer workload kind, set kind = htc|mtc");
    }
  }
  if (kind == "htc") {
    WorkloadTrace full = parse_swf_file(spec.trace_path);
    spec.trace =
        extract_window(full, raw.window_start_s * kMsPerSecond, window_ms);
  } else if (kind == "mtc") {
    spec.trace = parse_workflow_file(spec.trace_path);
    if (raw.repeat == "on_completion") {
      spec.trace = plan_repetition(spec.trace, window_ms);
    } else if (raw.repeat.rfind("interval:", 0) == 0) {
      int64_t interval_s =
          parse_int_exact(raw.repeat.substr(9), "repeat interval");
      spec.trace = plan_repetition_interval(spec.trace, window_ms,
                                            interval_s * kMsPerSecond);
    } else if (raw.repeat != "none") {
      throw SimError("provider '" + raw.name + "': unknown repeat mode '" +
                     raw.repeat + "'");
    }
  } else {
    throw SimError("provider '" + raw.name + "': unknown kind '" + kind +
                   "'");
  }
  spec.policy = policy_from_raw(raw);
  spec.scheduler_cycle_ms = raw.cycle_s > 0
                                ? raw.cycle_s * kMsPerSecond
                                : (kind == "htc" ? kDefaultHtcCycleMs
                                                 : kDefaultMtcCycleMs);
  return spec;
}

std::string fmt_ratio(int64_t r_milli) {
  if (r_milli < 0) return "inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(r_milli) / 1000.0);
  return buf;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open scenario file: " + path);
  Scenario scn;
  scn.name = std::filesystem::path(path).stem().string();
  int64_t window_s = 14 * 24 * 3600;
  std::vector<RawProvider> raws;
  RawProvider* current = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_comment_and_trim(&line);
    if (line.empty()) continue;
    if (line == "[provider]") {
      raws.emplace_back();
      current = &raws.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    strip_comment_and_trim(&key);
    strip_comment_and_trim(&value);
    if (key.empty() || value.empty()) {
      throw ParseError("expected 'key = value'", line_no);
    }
    if (!current) {
      if (key == "name") {
        scn.name = value;
      } else if (key == "window") {
        window_s = parse_int_exact(value, key);
      } else if (key == "speedup") {
        scn.speedup = parse_int_exact(value, key);
      } else if (key == "baseline") {
        scn.baseline_path = resolve_relative(path, value);
      } else {
        throw ParseError("unknown scenario key '" + key + "'", line_no);
      }
      continue;
    }
    if (key == "name") {
      current->name = value;
    } else if (key == "trace") {
      current->trace = value;
    } else if (key == "kind") {
      current->kind = value;
    } else if (key == "regime") {
      current->regime = value;
    } else if (key == "b") {
      current->b = parse_int_exact(value, key);
    } else if (key == "r") {
      current->r = value;
    } else if (key == "s") {
      current->s_s = parse_int_exact(value, key);
    } else if (key == "c") {
      current->c_s = parse_int_exact(value, key);
    } else if (key == "cycle") {
      current->cycle_s = parse_int_exact(value, key);
    } else if (key == "window_start") {
      current->window_start_s = parse_int_exact(value, key);
    } else if (key == "repeat") {
      current->repeat = value;
    } else {
      throw ParseError("unknown provider key '" + key + "'", line_no);
    }
  }
  if (window_s <= 0) throw SimError("window must be positive");
  if (scn.speedup <= 0) throw SimError("speedup must be positive");
  scn.window_ms = window_s * kMsPerSecond;
  if (raws.empty()) throw SimError("scenario has no providers: " + path);
  for (const RawProvider& raw : raws) {
    for (const ProviderSpec& done : scn.providers) {
      if (done.name == raw.name) {
        throw SimError("duplicate provider name '" + raw.name + "'");
      }
    }
    scn.providers.push_back(build_provider(raw, path, scn.window_ms));
  }
  return scn;
}

RunOutput run_scenario_full(const Scenario& scenario,
                            const MetricsReport* baseline,
                            bool keep_dispatch_log) {
  if (scenario.providers.empty()) {
    throw SimError("scenario has no providers");
  }
  if (scenario.speedup <= 0) throw SimError("speedup must be positive");
  if (scenario.window_ms % scenario.speedup != 0) {
    throw SimError("window must be divisible by the speedup factor");
  }
  Engine engine;
  if (keep_dispatch_log) engine.enable_dispatch_log();
  ProvisionService service;
  ConsumptionLedger ledger(static_cast<int>(scenario.providers.size()));
  TimeRescale rescale{scenario.speedup};
  std::vector<std::unique_ptr<RuntimeEnv>> envs;
  envs.reserve(scenario.providers.size());
  for (size_t i = 0; i < scenario.providers.size(); ++i) {
    const ProviderSpec& p = scenario.providers[i];
    envs.push_back(std::make_unique<RuntimeEnv>(
        static_cast<int>(i), p.name, p.policy, &p.trace, p.scheduler_cycle_ms,
        rescale, scenario.window_ms, &engine, &service, &ledger));
  }
  engine.set_handler(EventKind::EnvCreate, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_create(ev);
  });
  engine.set_handler(EventKind::JobSubmit, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_submit(ev);
  });
  engine.set_handler(EventKind::JobComplete, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_complete(ev);
  });
  engine.set_handler(EventKind::SchedulerTick, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_scheduler_tick(ev);
  });
  engine.set_handler(EventKind::LeaseTimerTick, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_lease_tick(ev);
  });
  engine.set_handler(EventKind::EnvDestroy, [&](Engine&, const Event& ev) {
    envs[ev.env]->on_destroy(ev);
  });
  const SimTime horizon_scaled = scenario.window_ms / scenario.speedup;
  for (size_t i = 0; i < envs.size(); ++i) {
    engine.schedule(0, EventKind::EnvCreate, static_cast<int>(i));
  }
  for (size_t i = 0; i < envs.size(); ++i) {
    engine.schedule(horizon_scaled, EventKind::EnvDestroy,
                    static_cast<int>(i));
  }
  engine.run(horizon_scaled);
  if (service.granted_total() != 0) {
    throw SimError("provisioned nodes were not fully reclaimed");
  }

  RunOutput out;
  MetricsReport& report = out.report;
  report.scenario_name = scenario.name;
  report.window_ms = scenario.window_ms;
  std::vector<int64_t> env_adjustments(envs.size(), 0);
  std::vector<int64_t> env_overhead(envs.size(), 0);
  for (const AdjustmentRecord& rec : service.log()) {
    env_adjustments[rec.env]++;
    env_overhead[rec.env] +=
        static_cast<int64_t>(std::abs(rec.delta_nodes)) * kAdjustCostMsPerNode;
  }
  for (size_t i = 0; i < envs.size(); ++i) {
    const RuntimeEnv& env = *envs[i];
    ProviderReport pr;
    pr.name = env.name();
    pr.kind = env.kind();
    pr.regime = regime_name(env.policy().regime, env.policy().leased);
    pr.completed_jobs = env.completed_count();
    pr.unfinished_jobs = env.unfinished_count();
    if (env.kind() == WorkloadKind::MTC) {
      const MtcStats& stats = env.mtc_stats();
      pr.tasks_per_second =
          stats.active_ms > 0
              ? static_cast<double>(stats.tasks_completed) * 1000.0 /
                    static_cast<double>(stats.active_ms)
              : 0.0;
    }
    pr.rc_node_ms = ledger.billed_node_ms(static_cast<int>(i));
    pr.peak_nodes = ledger.env_peak_nodes(static_cast<int>(i));
    pr.adjustments = env_adjustments[i];
    pr.overhead_node_ms = env_overhead[i];
    report.providers.push_back(std::move(pr));
  }
  report.trc_node_ms = ledger.total_node_ms();
  report.peak_nodes = ledger.peak_nodes();
  report.adjustment_count = ledger.adjustment_count();
  report.overhead_node_ms = ledger.overhead_node_ms();
  if (baseline) {
    for (ProviderReport& pr : report.providers) {
      for (const ProviderReport& base : baseline->providers) {
        if (base.name != pr.name || base.rc_node_ms <= 0) continue;
        pr.has_baseline = true;
        pr.saved_pct =
            static_cast<double>(base.rc_node_ms - pr.rc_node_ms) * 100.0 /
            static_cast<double>(base.rc_node_ms);
        break;
      }
    }
    if (baseline->trc_node_ms > 0) {
      report.has_baseline = true;
      report.total_saved_pct =
          static_cast<double>(baseline->trc_node_ms - report.trc_node_ms) *
          100.0 / static_cast<double>(baseline->trc_node_ms);
    }
  }
  out.outcomes.reserve(envs.size());
  for (const auto& env : envs) out.outcomes.push_back(env->outcomes());
  if (keep_dispatch_log) out.dispatch_log = engine.dispatch_log();
  return out;
}

MetricsReport run_scenario(const Scenario& scenario,
                           const MetricsReport* baseline) {
  return run_scenario_full(scenario, baseline, false).report;
}

MetricsReport run_scenario_with_baseline(const Scenario& scenario) {
  if (scenario.baseline_path.empty()) return run_scenario(scenario);
  Scenario base = load_scenario(scenario.baseline_path);
  base.baseline_path.clear();
  MetricsReport base_report = run_scenario(base);
  return run_scenario(scenario, &base_report);
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open sweep grid file: " + path);
  SweepSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_comment_and_trim(&line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = values'", line_no);
    }
    std::string key = line.substr(0, eq);
    std::string values = line.substr(eq + 1);
    strip_comment_and_trim(&key);
    std::istringstream vs(values);
    std::string tok;
    std::vector<std::string> toks;
    while (vs >> tok) toks.push_back(tok);
    if (toks.empty()) throw ParseError("no values for '" + key + "'", line_no);
    if (key == "b") {
      for (const std::string& t : toks) {
        spec.b_list.push_back(parse_int_exact(t, key));
      }
    } else if (key == "r") {
      for (const std::string& t : toks) {
        spec.r_milli_list.push_back(
            t == "inf" || t == "infinite" ? -1 : parse_micro(t) / 1000);
      }
    } else if (key == "s") {
      for (const std::string& t : toks) {
        spec.s_list_ms.push_back(parse_int_exact(t, key) * kMsPerSecond);
      }
    } else if (key == "c") {
      for (const std::string& t : toks) {
        spec.c_list_ms.push_back(parse_int_exact(t, key) * kMsPerSecond);
      }
    } else {
      throw ParseError("unknown grid key '" + key + "'", line_no);
    }
  }
  if (spec.b_list.empty()) spec.b_list.push_back(0);
  if (spec.r_milli_list.empty()) spec.r_milli_list.push_back(1500);
  if (spec.s_list_ms.empty()) spec.s_list_ms.push_back(60'000);
  if (spec.c_list_ms.empty()) spec.c_list_ms.push_back(3'600'000);
  return spec;
}

std::vector<SweepPoint> run_sweep(const Scenario& scenario,
                                  const SweepSpec& spec) {
  bool any_dynamic = false;
  for (const ProviderSpec& p : scenario.providers) {
    if (p.policy.regime == Regime::Dynamic) any_dynamic = true;
  }
  if (!any_dynamic) {
    throw SimError("sweep scenario needs at least one dynamic provider");
  }
  std::vector<SweepPoint> points;
  for (int64_t b : spec.b_list) {
    for (int64_t r_milli : spec.r_milli_list) {
      for (int64_t s_ms : spec.s_list_ms) {
        for (int64_t c_ms : spec.c_list_ms) {
          Scenario tuned = scenario;
          for (ProviderSpec& p : tuned.providers) {
            if (p.policy.regime != Regime::Dynamic) continue;
            p.policy.initial_nodes = static_cast<int>(b);
            p.policy.threshold_infinite = r_milli < 0;
            if (r_milli >= 0) p.policy.threshold_milli = r_milli;
            p.policy.check_cycle_ms = s_ms;
            p.policy.lease_unit_ms = c_ms;
            std::string bad = p.policy.validate();
            if (!bad.empty()) {
              throw SimError("sweep point invalid for provider '" + p.name +
                             "': " + bad);
            }
          }
          SweepPoint point;
          point.b = b;
          point.r_milli = r_milli;
          point.s_ms = s_ms;
          point.c_ms = c_ms;
          point.report = run_scenario(tuned);
          points.push_back(std::move(point));
        }
      }
    }
  }
  return points;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out =
      "b,r,s_s,c_s,provider,kind,completed,unfinished,tasks_per_second,"
      "rc_node_hours,peak_nodes,adjustments,overhead_node_hours\n";
  char buf[64];
  for (const SweepPoint& point : points) {
    auto prefix = [&](std::string* row) {
      *row += std::to_string(point.b);
      *row += ',';
      *row += fmt_ratio(point.r_milli);
      *row += ',';
      *row += std::to_string(point.s_ms / kMsPerSecond);
      *row += ',';
      *row += std::to_string(point.c_ms / kMsPerSecond);
      *row += ',';
    };
    int64_t completed = 0;
    int64_t unfinished = 0;
    for (const ProviderReport& p : point.report.providers) {
      prefix(&out);
      out += p.name;
      out += ',';
      out += p.kind == WorkloadKind::HTC ? "htc" : "mtc";
      out += ',';
      out += std::to_string(p.completed_jobs);
      out += ',';
      out += std::to_string(p.unfinished_jobs);
      out += ',';
      if (p.kind == WorkloadKind::MTC) {
        std::snprintf(buf, sizeof(buf), "%.3f", p.tasks_per_second);
        out += buf;
      }
      out += ',';
      std::snprintf(buf, sizeof(buf), "%.3f", node_ms_to_hours(p.rc_node_ms));
      out += buf;
      out += ',';
      out += std::to_string(p.peak_nodes);
      out += ',';
      out += std::to_string(p.adjustments);
      out += ',';
      std::snprintf(buf, sizeof(buf), "%.3f",
                    node_ms_to_hours(p.overhead_node_ms));
      out += buf;
      out += '\n';
      completed += p.completed_jobs;
      unfinished += p.unfinished_jobs;
    }
    prefix(&out);
    out += "__total__,,";
    out += std::to_string(completed);
    out += ',';
    out += std::to_string(unfinished);
    out += ",,";
    std::snprintf(buf, sizeof(buf), "%.3f",
                  node_ms_to_hours(point.report.trc_node_ms));
    out += buf;
    out += ',';
    out += std::to_string(point.report.peak_nodes);
    out += ',';
    out += std::to_string(point.report.adjustment_count);
    out += ',';
    std::snprintf(buf, sizeof(buf), "%.3f",
                  node_ms_to_hours(point.report.overhead_node_ms));
    out += buf;
    out += '\n';
  }
  return out;
}

Conf1Result check_conf1_equivalence(const WorkloadTrace& trace, int64_t lr,
                                    int64_t window_ms, int64_t speedup,
                                    int64_t scheduler_cycle_ms,
                                    int64_t lease_unit_ms) {
  auto make = [&](bool dynamic) {
    Scenario scn;
    scn.name = dynamic ? "equiv_dynamic" : "equiv_static";
    scn.window_ms = window_ms;
    scn.speedup = speedup;
    ProviderSpec p;
    p.name = "w";
    p.trace = trace;
    p.scheduler_cycle_ms = scheduler_cycle_ms;
    p.policy.regime = dynamic ? Regime::Dynamic : Regime::Static;
    p.policy.initial_nodes = static_cast<int>(lr);
    p.policy.leased = false;
    p.policy.threshold_infinite = true;
    p.policy.check_cycle_ms = scheduler_cycle_ms;
    p.policy.lease_unit_ms = lease_unit_ms;
    scn.providers.push_back(std::move(p));
    return scn;
  };
  RunOutput st = run_scenario_full(make(false));
  RunOutput dy = run_scenario_full(make(true));
  Conf1Result res;
  const ProviderReport& ps = st.report.providers[0];
  const ProviderReport& pd = dy.report.providers[0];
  char buf[256];
  if (ps.rc_node_ms != pd.rc_node_ms) {
    std::snprintf(buf, sizeof(buf),
                  "consumption differs: static %lld vs dynamic %lld node-ms",
                  static_cast<long long>(ps.rc_node_ms),
                  static_cast<long long>(pd.rc_node_ms));
    res.divergence = buf;
    return res;
  }
  if (ps.completed_jobs != pd.completed_jobs ||
      ps.unfinished_jobs != pd.unfinished_jobs) {
    std::snprintf(buf, sizeof(buf),
                  "completion counts differ: static %lld/%lld vs dynamic "
                  "%lld/%lld",
                  static_cast<long long>(ps.completed_jobs),
                  static_cast<long long>(ps.unfinished_jobs),
                  static_cast<long long>(pd.completed_jobs),
                  static_cast<long long>(pd.unfinished_jobs));
    res.divergence = buf;
    return res;
  }
  if (ps.tasks_per_second != pd.tasks_per_second) {
    std::snprintf(buf, sizeof(buf),
                  "throughput differs: static %.9f vs dynamic %.9f",
                  ps.tasks_per_second, pd.tasks_per_second);
    res.divergence = buf;
    return res;
  }
  if (ps.peak_nodes != pd.peak_nodes) {
    std::snprintf(buf, sizeof(buf), "peak differs: static %lld vs dynamic %lld",
                  static_cast<long long>(ps.peak_nodes),
                  static_cast<long long>(pd.peak_nodes));
    res.divergence = buf;
    return res;
  }
  const std::vector<JobOutcome>& so = st.outcomes[0];
  const std::vector<JobOutcome>& dn = dy.outcomes[0];
  if (so.size() != dn.size()) {
    std::snprintf(buf, sizeof(buf), "outcome counts differ: %zu vs %zu",
                  so.size(), dn.size());
    res.divergence = buf;
    return res;
  }
  for (size_t i = 0; i < so.size(); ++i) {
    if (so[i].id != dn[i].id || so[i].start_ms != dn[i].start_ms ||
        so[i].complete_ms != dn[i].complete_ms) {
      std::snprintf(buf, sizeof(buf),
                    "job %s diverges: static start=%lld complete=%lld, "
                    "dynamic start=%lld complete=%lld",
                    so[i].id.c_str(), static_cast<long long>(so[i].start_ms),
                    static_cast<long long>(so[i].complete_ms),
                    static_cast<long long>(dn[i].start_ms),
                    static_cast<long long>(dn[i].complete_ms));
      res.divergence = buf;
      return res;
    }
  }
  res.pass = true;
  return res;
}

DominanceResult check_dominance(const Scenario& scenario) {
  if (scenario.baseline_path.empty()) {
    throw SimError("dominance check needs a baseline scenario");
  }
  Scenario base = load_scenario(scenario.baseline_path);
  base.baseline_path.clear();
  MetricsReport base_report = run_scenario(base);
  MetricsReport report = run_scenario(scenario, &base_report);
  DominanceResult res;
  char buf[256];
  if (report.trc_node_ms > base_report.trc_node_ms) {
    std::snprintf(buf, sizeof(buf),
                  "total consumption regressed: %.3f vs baseline %.3f "
                  "node-hours",
                  node_ms_to_hours(report.trc_node_ms),
                  node_ms_to_hours(base_report.trc_node_ms));
    res.detail = buf;
    return res;
  }
  for (const ProviderReport& p : report.providers) {
    const ProviderReport* bp = nullptr;
    for (const ProviderReport& cand : base_report.providers) {
      if (cand.name == p.name) {
        bp = &cand;
        break;
      }
    }
    if (!bp) continue;
    if (p.completed_jobs < bp->completed_jobs) {
      std::snprintf(buf, sizeof(buf),
                    "provider %s completes less work: %lld vs %lld",
                    p.name.c_str(), static_cast<long long>(p.completed_jobs),
                    static_cast<long long>(bp->completed_jobs));
      res.detail = buf;
      return res;
    }
    if (p.kind == WorkloadKind::MTC &&
        p.tasks_per_second + 1e-9 < bp->tasks_per_second) {
      std::snprintf(buf, sizeof(buf),
                    "provider %s throughput regressed: %.3f vs %.3f",
                    p.name.c_str(), p.tasks_per_second, bp->tasks_per_second);
      res.detail = buf;
      return res;
    }
  }
  res.pass = true;
  char ok[160];
  std::snprintf(ok, sizeof(ok),
                "consumption %.3f <= baseline %.3f node-hours, performance "
                "preserved",
                node_ms_to_hours(report.trc_node_ms),
                node_ms_to_hours(base_report.trc_node_ms));
  res.detail = ok;
  return res;
}

void write_reports(const std::vector<MetricsReport>& reports,
                   const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const MetricsReport& report : reports) {
    std::filesystem::path file =
        std::filesystem::path(out_dir) / (report.scenario_name + ".csv");
    std::ofstream out(file);
    if (!out) throw SimError("cannot write report: " + file.string());
    out << report_to_csv(report);
  }
}

}  // namespace provsim

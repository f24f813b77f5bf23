// Generates the bundled two-week HTC traces, the image-mosaic workflow, the
// baseline scenario files, sweep grids, and the cost-model input.  Everything
// is seeded and deterministic: re-running refreshes data/ byte-for-byte.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "provsim/sim_core.hpp"
#include "provsim/trace.hpp"

namespace {

struct GenJob {
  int64_t submit_s = 0;
  int64_t run_s = 0;
  int nodes = 0;
};

struct Interval {
  int64_t lo = 0;  // inclusive
  int64_t hi = 0;  // exclusive
};

constexpr int64_t kDay = 86'400;
constexpr int64_t kWindow = 14 * kDay;  // 1,209,600 s

bool overlaps(const std::vector<Interval>& keepouts, int64_t lo, int64_t hi,
              int64_t* bump_to) {
  for (const Interval& k : keepouts) {
    if (lo < k.hi && k.lo < hi) {
      *bump_to = k.hi;
      return true;
    }
  }
  return false;
}

// Small filler jobs in staggered bursts of `members`.  Burst node sizes and
// per-job run times are drawn uniformly, then nudged so the totals are hit
// exactly; submit times keep a 70 s mutual distance so at most one filler
// job is ever waiting at a scheduling pass.
struct BgPlan {
  int bursts = 0;
  int last_burst_members = 4;
  int64_t stagger_s = 0;
  int64_t spacing_s = 0;
  int64_t first_start_s = 0;
  int64_t nodes_total = 0;  // sum of per-burst sizes over full bursts
  int last_burst_nodes = 0;
  int64_t run_total_s = 0;  // over all filler jobs
  int64_t run_lo_s = 0;
  int64_t run_hi_s = 0;
  uint64_t seed = 0;
};

void gen_background(std::vector<GenJob>* jobs,
                    const std::vector<Interval>& keepouts, const BgPlan& plan) {
  std::mt19937_64 rng(plan.seed);
  const int full_bursts = plan.bursts - 1;
  std::vector<int> burst_nodes(full_bursts);
  int64_t node_sum = 0;
  for (int& n : burst_nodes) {
    n = 2 + static_cast<int>(rng() % 8);  // 2..9
    node_sum += n;
  }
  for (int i = 0; node_sum != plan.nodes_total; i = (i + 1) % full_bursts) {
    if (node_sum < plan.nodes_total && burst_nodes[i] < 9) {
      burst_nodes[i]++;
      node_sum++;
    } else if (node_sum > plan.nodes_total && burst_nodes[i] > 2) {
      burst_nodes[i]--;
      node_sum--;
    }
  }
  const int job_count = 4 * full_bursts + plan.last_burst_members;
  std::vector<int64_t> runs(job_count);
  int64_t run_sum = 0;
  const int64_t span = plan.run_hi_s - plan.run_lo_s + 1;
  for (int64_t& r : runs) {
    r = plan.run_lo_s + static_cast<int64_t>(rng() % span);
    run_sum += r;
  }
  for (int i = 0; run_sum != plan.run_total_s;
       i = (i + 1) % static_cast<int>(runs.size())) {
    if (run_sum < plan.run_total_s && runs[i] < plan.run_hi_s) {
      runs[i]++;
      run_sum++;
    } else if (run_sum > plan.run_total_s && runs[i] > plan.run_lo_s) {
      runs[i]--;
      run_sum--;
    }
  }

  std::vector<int64_t> submits;  // sorted, for the mutual-distance check
  auto too_close = [&](int64_t s) {
    auto it = std::lower_bound(submits.begin(), submits.end(), s - 69);
    return it != submits.end() && *it <= s + 69;
  };
  int64_t t = plan.first_start_s;
  int placed = 0;
  int job_at = 0;
  const int64_t burst_span =
      3 * plan.stagger_s + plan.run_hi_s + 100;
  while (placed < plan.bursts) {
    if (t + burst_span >= kWindow) {
      throw provsim::SimError("filler bursts do not fit the window");
    }
    int64_t bump = 0;
    if (overlaps(keepouts, t, t + burst_span, &bump)) {
      t = bump + 61;
      continue;
    }
    int members = placed + 1 == plan.bursts ? plan.last_burst_members : 4;
    bool clean = true;
    for (int j = 0; j < members; ++j) {
      if (too_close(t + plan.stagger_s * j)) {
        clean = false;
        break;
      }
    }
    if (!clean) {
      t += 37;
      continue;
    }
    int nodes = placed + 1 == plan.bursts ? plan.last_burst_nodes
                                          : burst_nodes[placed];
    for (int j = 0; j < members; ++j) {
      int64_t s = t + plan.stagger_s * j;
      jobs->push_back({s, runs[job_at++], nodes});
      submits.insert(std::lower_bound(submits.begin(), submits.end(), s), s);
    }
    placed++;
    t += plan.spacing_s + static_cast<int64_t>(rng() % 7) * 10;
  }
}

// Two-week accelerator-lab trace: a six-round analysis spell every day, a
// small mid-afternoon trio, one full-machine straggler near the horizon, and
// filler singles in between.
std::vector<GenJob> gen_nasa() {
  std::vector<GenJob> jobs;
  const int64_t kOpen = 36'000;
  const int lanes0[5] = {64, 56, 48, 40, 33};
  const int lanes[4] = {64, 56, 48, 40};
  std::vector<Interval> keepouts;
  for (int d = 0; d < 14; ++d) {
    int64_t open = kDay * d + kOpen;
    const int* lane = d == 0 ? lanes0 : lanes;
    int width = d == 0 ? 5 : 4;
    for (int round = 0; round <= 5; ++round) {
      int64_t submit = round == 0 ? open : open + 3'900 * round - 300;
      for (int k = 0; k < width; ++k) jobs.push_back({submit, 3'900, lane[k]});
    }
    jobs.push_back({open + 46'800, 600, 24});
    jobs.push_back({open + 46'800, 600, 20});
    jobs.push_back({open + 46'800, 600, 14});
    keepouts.push_back({open - 3'600, open + 26'000});
    keepouts.push_back({open + 46'000, open + 48'200});
  }
  jobs.push_back({1'206'900, 3'000, 128});
  keepouts.push_back({kWindow - 4'000, kWindow});

  BgPlan plan;
  plan.bursts = 555;
  plan.last_burst_members = 3;
  plan.stagger_s = 750;
  plan.spacing_s = 1'230;
  plan.first_start_s = 400;
  plan.nodes_total = 3'104;
  plan.last_burst_nodes = 8;
  plan.run_total_s = 135'300;
  plan.run_lo_s = 35;
  plan.run_hi_s = 87;
  plan.seed = 0x5ca1ab1e;
  gen_background(&jobs, keepouts, plan);
  return jobs;
}

// Two-week shared-cluster trace: ten-round spells with day-dependent widths,
// one oversubscribed day, a late burst that a fixed machine cannot finish in
// time, and a tail of week-long jobs that nothing finishes.
std::vector<GenJob> gen_blue() {
  std::vector<GenJob> jobs;
  const int64_t kOpen = 21'600;
  // per-day spell lanes; day 6 is the oversubscribed one
  const std::vector<std::vector<int>> day_lanes = {
      {40, 38, 32},          // 110
      {40, 38, 32},          // 110
      {40, 38, 32},          // 110
      {40, 38, 32},          // 110
      {40, 38, 32},          // 110
      {40, 38, 32},          // 110
      {144, 96, 91},         // mega day, handled separately
      {40, 38, 32},          // 110
      {56, 48, 44, 42},      // 190
      {56, 50, 46, 42},      // 194
      {56, 50, 48, 44},      // 198
      {56, 52, 48, 46},      // 202
      {56, 54, 50, 48},      // 208
      {40, 38, 32},          // 110
  };
  std::vector<Interval> keepouts;
  for (int d = 0; d < 14; ++d) {
    int64_t open = kDay * d + kOpen;
    const std::vector<int>& lane = day_lanes[d];
    int rounds = d == 6 ? 11 : 10;
    for (int round = 0; round < rounds; ++round) {
      int64_t submit = open + 3'300 * round;
      for (int n : lane) jobs.push_back({submit, 3'540, n});
    }
    if (d == 6) {
      keepouts.push_back({536'400, 579'700});
    } else {
      keepouts.push_back({open - 3'600, open + 36'500});
    }
  }
  for (int j = 0; j < 16; ++j) jobs.push_back({1'204'400, 2'900, 18});
  for (int j = 0; j < 9; ++j) jobs.push_back({1'209'000, 246'077, 4});
  keepouts.push_back({1'200'600, kWindow});

  BgPlan plan;
  plan.bursts = 542;
  plan.last_burst_members = 4;
  plan.stagger_s = 900;
  plan.spacing_s = 1'020;
  plan.first_start_s = 600;
  plan.nodes_total = 2'552 - 5;
  plan.last_burst_nodes = 5;
  plan.run_total_s = 1'641'759;
  plan.run_lo_s = 690;
  plan.run_hi_s = 825;
  plan.seed = 0xb1e55ed;
  gen_background(&jobs, keepouts, plan);
  return jobs;
}

std::string render_swf(std::vector<GenJob> jobs) {
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const GenJob& x, const GenJob& y) {
                     return x.submit_s < y.submit_s;
                   });
  provsim::WorkloadTrace trace;
  trace.kind = provsim::WorkloadKind::HTC;
  for (size_t i = 0; i < jobs.size(); ++i) {
    provsim::JobRecord job;
    job.job_id = static_cast<int64_t>(i + 1);
    job.submit_ms = jobs[i].submit_s * 1000;
    job.run_ms = jobs[i].run_s * 1000;
    job.nodes = jobs[i].nodes;
    trace.max_demand = std::max(trace.max_demand, job.nodes);
    trace.jobs.push_back(job);
  }
  int64_t total_run = 0;
  for (const GenJob& j : jobs) total_run += j.run_s;
  std::printf("  %zu jobs, total run %lld s (mean %.3f s), max demand %d\n",
              jobs.size(), static_cast<long long>(total_run),
              static_cast<double>(total_run) / static_cast<double>(jobs.size()),
              trace.max_demand);
  return provsim::serialize_swf(trace);
}

// 1000-task mosaic workflow: 166 projections fan out into 662 differences,
// collapse through fit/model singletons, fan out into 166 corrections, and
// finish through a five-stage reduction tail.
std::string render_montage() {
  std::string out;
  char line[160];
  for (int j = 0; j < 166; ++j) {
    std::snprintf(line, sizeof(line), "p%d mProject 14 -\n", j);
    out += line;
  }
  for (int i = 0; i < 662; ++i) {
    int run = i < 625 ? 11 : (i == 625 ? 12 : 14);
    int a = i % 166;
    int b = (a + 3) % 166;
    std::snprintf(line, sizeof(line), "d%d mDiffFit %d p%d,p%d\n", i, run, a,
                  b);
    out += line;
  }
  out += "cf mConcatFit 60 ";
  for (int i = 0; i < 662; ++i) {
    out += i ? ",d" : "d";
    out += std::to_string(i);
  }
  out += "\nbm mBgModel 75 cf\n";
  for (int j = 0; j < 166; ++j) {
    std::snprintf(line, sizeof(line), "b%d mBackground 8 bm,p%d\n", j, j);
    out += line;
  }
  out += "it mImgtbl 50 ";
  for (int j = 0; j < 166; ++j) {
    out += j ? ",b" : "b";
    out += std::to_string(j);
  }
  out += "\nad mAdd 85 it\n";
  out += "sh mShrink 45 ad\n";
  out += "jp mJPEG 22 sh\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw provsim::SimError("cannot write " + path.string());
  out << body;
}

std::string scenario_body(const std::string& name, const std::string& regime,
                          int b_nasa, int b_blue, int b_montage,
                          bool with_baseline, bool dynamic_knobs) {
  std::string s;
  s += "name = " + name + "\n";
  s += "window = 1209600\n";
  s += "speedup = 1000\n";
  if (with_baseline) s += "baseline = baseline_dedicated.scn\n";
  auto provider = [&](const std::string& pname, const std::string& trace,
                      int b, const std::string& knobs) {
    s += "\n[provider]\n";
    s += "name = " + pname + "\n";
    s += "trace = " + trace + "\n";
    s += "regime = " + regime + "\n";
    s += "b = " + std::to_string(b) + "\n";
    s += knobs;
  };
  provider("nasa", "nasa_ipsc_2w.swf", b_nasa,
           dynamic_knobs ? "r = 1.5\ns = 60\nc = 3600\n" : "");
  provider("blue", "sdsc_blue_2w.swf", b_blue,
           dynamic_knobs ? "r = 1.5\ns = 60\nc = 3600\n" : "");
  provider("montage", "montage_1000.wf", b_montage,
           std::string(dynamic_knobs ? "r = 8\ns = 1\nc = 3600\n" : "") +
               "cycle = 1\nrepeat = interval:17500\n");
  return s;
}

std::string sweep_scenario_body(const std::string& name,
                                const std::string& pname,
                                const std::string& trace, bool mtc) {
  std::string s;
  s += "name = " + name + "\n";
  s += "window = 1209600\n";
  s += "speedup = 1000\n";
  s += "\n[provider]\n";
  s += "name = " + pname + "\n";
  s += "trace = " + trace + "\n";
  s += "regime = dynamic\n";
  if (mtc) {
    s += "b = 20\nr = 8\ns = 1\nc = 3600\n";
    s += "cycle = 1\nrepeat = interval:17500\n";
  } else {
    s += "b = 40\nr = 1.5\ns = 60\nc = 3600\n";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bundled workload and scenario generator"};
  std::string out_dir = "data";
  app.add_option("--out", out_dir, "output directory (default data)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);

    std::printf("nasa_ipsc_2w.swf\n");
    write_file(dir / "nasa_ipsc_2w.swf", render_swf(gen_nasa()));
    std::printf("sdsc_blue_2w.swf\n");
    write_file(dir / "sdsc_blue_2w.swf", render_swf(gen_blue()));
    std::printf("montage_1000.wf\n");
    write_file(dir / "montage_1000.wf", render_montage());

    write_file(dir / "baseline_dedicated.scn",
               scenario_body("baseline_dedicated", "static", 128, 144, 166,
                             false, false));
    write_file(dir / "baseline_fixed.scn",
               scenario_body("baseline_fixed", "static_leased", 128, 144, 166,
                             true, false));
    write_file(dir / "baseline_perjob.scn",
               scenario_body("baseline_perjob", "per_job", 0, 0, 0, true,
                             false));
    write_file(dir / "baseline_dynamic.scn",
               scenario_body("baseline_dynamic", "dynamic", 40, 40, 20, true,
                             true));

    write_file(dir / "sweep_nasa.scn",
               sweep_scenario_body("sweep_nasa", "nasa", "nasa_ipsc_2w.swf",
                                   false));
    write_file(dir / "sweep_blue.scn",
               sweep_scenario_body("sweep_blue", "blue", "sdsc_blue_2w.swf",
                                   false));
    write_file(dir / "sweep_montage.scn",
               sweep_scenario_body("sweep_montage", "montage",
                                   "montage_1000.wf", true));

    write_file(dir / "grid_htc.txt",
               "b = 0 20 40 64 80 100 128\n"
               "r = 1.5 2 4 100\n"
               "s = 60\n"
               "c = 1800 3600 7200\n");
    write_file(dir / "grid_mtc.txt",
               "b = 0 10 20 50 100 166 200\n"
               "r = 2 4 8 16 100\n"
               "s = 1\n"
               "c = 3600\n");

    write_file(dir / "tco_baseline.txt",
               "# monthly cost comparison inputs, amounts in dollars\n"
               "capex = 120000\n"
               "depreciation_months = 96\n"
               "maintenance = 30000\n"
               "energy_space_per_month = 1600\n"
               "instances = 30\n"
               "hours = 720\n"
               "price_per_instance_hour = 0.1\n"
               "inbound_gb = 1000\n"
               "price_per_gb = 0.1\n");
    std::printf("wrote %s\n", out_dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

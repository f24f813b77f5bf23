#include "provsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "provsim/sim_core.hpp"

namespace provsim {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// Full-token numeric parse; seconds are converted to exact ms via llround,
// which is lossless for the integer and millisecond-resolution inputs we
// accept.
double parse_number(const std::string& tok, int field, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty()) {
    throw ParseError("field " + std::to_string(field) + " is not numeric: '" +
                         tok + "'",
                     line);
  }
  return v;
}

int64_t seconds_to_ms(double seconds) {
  return static_cast<int64_t>(std::llround(seconds * 1000.0));
}

void append_seconds(std::string* out, int64_t ms) {
  char buf[48];
  if (ms % kMsPerSecond == 0) {
    std::snprintf(buf, sizeof(buf), "%lld",
                  static_cast<long long>(ms / kMsPerSecond));
  } else {
    std::snprintf(buf, sizeof(buf), "%.3f",
                  static_cast<double>(ms) / 1000.0);
  }
  *out += buf;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open trace file: " + path);
  return in;
}

}  // namespace

WorkloadTrace parse_swf(std::istream& in) {
  WorkloadTrace trace;
  trace.kind = WorkloadKind::HTC;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto semi = line.find(';');
    if (semi != std::string::npos) line.erase(semi);
    std::vector<std::string> f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() < 8) {
      throw ParseError("expected at least 8 fields, got " +
                           std::to_string(f.size()),
                       line_no);
    }
    JobRecord job;
    job.job_id = static_cast<int64_t>(parse_number(f[0], 1, line_no));
    job.submit_ms = seconds_to_ms(parse_number(f[1], 2, line_no));
    job.run_ms = seconds_to_ms(parse_number(f[3], 4, line_no));
    int64_t req = static_cast<int64_t>(parse_number(f[7], 8, line_no));
    if (req <= 0) req = static_cast<int64_t>(parse_number(f[4], 5, line_no));
    if (job.submit_ms < 0 || job.run_ms <= 0 || req <= 0) {
      trace.skipped_records++;
      continue;
    }
    job.nodes = static_cast<int>(req);
    trace.max_demand = std::max(trace.max_demand, job.nodes);
    trace.duration_ms =
        std::max(trace.duration_ms, job.submit_ms + job.run_ms);
    trace.jobs.push_back(job);
  }
  return trace;
}

WorkloadTrace parse_swf_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return parse_swf(in);
}

std::string serialize_swf(const WorkloadTrace& trace) {
  std::string out;
  out += "; Version: 2.2\n";
  out += "; MaxProcs: " + std::to_string(trace.max_demand) + "\n";
  char tail[160];
  for (const JobRecord& job : trace.jobs) {
    out += std::to_string(job.job_id);
    out += ' ';
    append_seconds(&out, job.submit_ms);
    out += " 0 ";
    append_seconds(&out, job.run_ms);
    // allocated == requested; unused accounting fields stay -1
    std::snprintf(tail, sizeof(tail),
                  " %d -1 -1 %d -1 -1 1 -1 -1 -1 -1 -1 -1 -1\n", job.nodes,
                  job.nodes);
    out += tail;
  }
  return out;
}

WorkloadTrace parse_workflow(std::istream& in) {
  WorkloadTrace trace;
  trace.kind = WorkloadKind::MTC;
  struct Row {
    int line;
    std::string deps;
  };
  std::vector<Row> rows;
  std::unordered_map<std::string, int> index_of;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> f = split_ws(line);
    if (f.empty()) continue;
    if (f.size() < 3 || f.size() > 4) {
      throw ParseError("expected 'id type run_s deps', got " +
                           std::to_string(f.size()) + " fields",
                       line_no);
    }
    WorkflowTask task;
    task.id = f[0];
    task.type = f[1];
    task.run_ms = seconds_to_ms(parse_number(f[2], 3, line_no));
    if (task.run_ms <= 0) {
      throw ParseError("task '" + task.id + "' has non-positive run time",
                       line_no);
    }
    task.nodes = 1;
    if (!index_of.emplace(task.id, static_cast<int>(trace.tasks.size()))
             .second) {
      throw ParseError("duplicate task id '" + task.id + "'", line_no);
    }
    trace.tasks.push_back(std::move(task));
    rows.push_back({line_no, f.size() == 4 ? f[3] : std::string("-")});
  }
  // Second pass: dependency names may reference tasks in either direction.
  for (size_t t = 0; t < rows.size(); ++t) {
    const std::string& spec = rows[t].deps;
    if (spec == "-") continue;
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) {
        throw ParseError("empty dependency name", rows[t].line);
      }
      auto it = index_of.find(name);
      if (it == index_of.end()) {
        throw ParseError("unknown dependency '" + name + "'", rows[t].line);
      }
      if (it->second == static_cast<int>(t)) {
        throw ParseError("task '" + name + "' depends on itself",
                         rows[t].line);
      }
      trace.tasks[t].deps.push_back(it->second);
    }
  }
  for (const WorkflowTask& task : trace.tasks) {
    trace.max_demand = std::max(trace.max_demand, task.nodes);
  }
  return trace;
}

WorkloadTrace parse_workflow_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return parse_workflow(in);
}

std::string serialize_workflow(const WorkloadTrace& trace) {
  std::string out;
  for (const WorkflowTask& task : trace.tasks) {
    out += task.id;
    out += ' ';
    out += task.type;
    out += ' ';
    append_seconds(&out, task.run_ms);
    out += ' ';
    if (task.deps.empty()) {
      out += '-';
    } else {
      for (size_t d = 0; d < task.deps.size(); ++d) {
        if (d) out += ',';
        out += trace.tasks[task.deps[d]].id;
      }
    }
    out += '\n';
  }
  return out;
}

WorkloadTrace extract_window(const WorkloadTrace& trace, int64_t start_ms,
                             int64_t length_ms) {
  if (start_ms < 0 || length_ms <= 0) {
    throw SimError("window must have non-negative start and positive length");
  }
  WorkloadTrace out = trace;
  out.duration_ms = length_ms;
  if (trace.kind != WorkloadKind::HTC) return out;
  out.jobs.clear();
  out.max_demand = 0;
  for (const JobRecord& job : trace.jobs) {
    if (job.submit_ms < start_ms || job.submit_ms >= start_ms + length_ms) {
      continue;
    }
    JobRecord kept = job;
    kept.submit_ms -= start_ms;
    out.max_demand = std::max(out.max_demand, kept.nodes);
    out.jobs.push_back(kept);
  }
  return out;
}

WorkloadTrace rescale_time(const WorkloadTrace& trace, const TimeRescale& r) {
  if (r.speedup_factor <= 0) throw SimError("speedup factor must be positive");
  const int64_t f = r.speedup_factor;
  WorkloadTrace out = trace;
  for (JobRecord& job : out.jobs) {
    job.submit_ms /= f;
    job.run_ms = std::max<int64_t>(1, job.run_ms / f);
  }
  for (WorkflowTask& task : out.tasks) {
    task.run_ms = std::max<int64_t>(1, task.run_ms / f);
  }
  out.duration_ms /= f;
  return out;
}

WorkloadTrace plan_repetition(const WorkloadTrace& trace, int64_t horizon_ms) {
  if (trace.kind != WorkloadKind::MTC) {
    throw SimError("repetition applies to workflow traces only");
  }
  if (horizon_ms <= 0) throw SimError("repetition horizon must be positive");
  WorkloadTrace out = trace;
  out.repetition.mode = RepetitionMode::OnCompletion;
  out.repetition.horizon_ms = horizon_ms;
  out.repetition.interval_ms = 0;
  return out;
}

WorkloadTrace plan_repetition_interval(const WorkloadTrace& trace,
                                       int64_t horizon_ms,
                                       int64_t interval_ms) {
  if (trace.kind != WorkloadKind::MTC) {
    throw SimError("repetition applies to workflow traces only");
  }
  if (horizon_ms <= 0) throw SimError("repetition horizon must be positive");
  if (interval_ms <= 0) throw SimError("repetition interval must be positive");
  WorkloadTrace out = trace;
  out.repetition.mode = RepetitionMode::Interval;
  out.repetition.horizon_ms = horizon_ms;
  out.repetition.interval_ms = interval_ms;
  return out;
}

std::vector<std::string> validate_trace(const WorkloadTrace& trace) {
  std::vector<std::string> diags;
  if (trace.kind == WorkloadKind::HTC) {
    int64_t prev_submit = 0;
    for (size_t j = 0; j < trace.jobs.size(); ++j) {
      const JobRecord& job = trace.jobs[j];
      if (job.submit_ms < prev_submit) {
        diags.push_back("job " + std::to_string(job.job_id) + " at index " +
                        std::to_string(j) + " breaks submit-time order");
      }
      prev_submit = std::max(prev_submit, job.submit_ms);
      if (job.run_ms <= 0) {
        diags.push_back("job " + std::to_string(job.job_id) +
                        " has non-positive run time");
      }
      if (job.nodes <= 0) {
        diags.push_back("job " + std::to_string(job.job_id) +
                        " has non-positive node count");
      }
    }
    return diags;
  }
  const int n = static_cast<int>(trace.tasks.size());
  for (int t = 0; t < n; ++t) {
    const WorkflowTask& task = trace.tasks[t];
    if (task.run_ms <= 0) {
      diags.push_back("task '" + task.id + "' has non-positive run time");
    }
    if (task.nodes <= 0) {
      diags.push_back("task '" + task.id + "' has non-positive node count");
    }
    for (int d : task.deps) {
      if (d < 0 || d >= n) {
        diags.push_back("task '" + task.id + "' has dependency index " +
                        std::to_string(d) + " out of range");
      } else if (d == t) {
        diags.push_back("task '" + task.id + "' depends on itself");
      }
    }
  }
  try {
    topological_order(trace);
  } catch (const SimError& e) {
    diags.push_back(e.what());
  }
  return diags;
}

std::vector<int> topological_order(const WorkloadTrace& trace) {
  const int n = static_cast<int>(trace.tasks.size());
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int t = 0; t < n; ++t) {
    for (int d : trace.tasks[t].deps) {
      if (d < 0 || d >= n) {
        throw SimError("task '" + trace.tasks[t].id +
                       "' has an out-of-range dependency");
      }
      children[d].push_back(t);
      indegree[t]++;
    }
  }
  std::vector<int> order;
  order.reserve(n);
  std::deque<int> ready;
  for (int t = 0; t < n; ++t) {
    if (indegree[t] == 0) ready.push_back(t);
  }
  while (!ready.empty()) {
    int t = ready.front();
    ready.pop_front();
    order.push_back(t);
    for (int ch : children[t]) {
      if (--indegree[ch] == 0) ready.push_back(ch);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    for (int t = 0; t < n; ++t) {
      if (indegree[t] > 0) {
        throw SimError("dependency cycle involving task '" +
                       trace.tasks[t].id + "'");
      }
    }
  }
  return order;
}

MtcEmpiricals compute_mtc_empiricals(const WorkloadTrace& trace) {
  if (trace.kind != WorkloadKind::MTC) {
    throw SimError("empirical demand statistics apply to workflow traces");
  }
  std::vector<int> order = topological_order(trace);
  const int n = static_cast<int>(trace.tasks.size());
  std::vector<int> level(n, 0);
  std::vector<int64_t> level_demand;
  for (int t : order) {
    int lv = 0;
    for (int d : trace.tasks[t].deps) lv = std::max(lv, level[d] + 1);
    level[t] = lv;
    if (static_cast<int>(level_demand.size()) <= lv) {
      level_demand.resize(lv + 1, 0);
    }
    level_demand[lv] += trace.tasks[t].nodes;
  }
  MtcEmpiricals emp;
  if (!level_demand.empty()) {
    emp.ra = level_demand[0];
    emp.rm = *std::max_element(level_demand.begin(), level_demand.end());
  }
  return emp;
}

}  // namespace provsim

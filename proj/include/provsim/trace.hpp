#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace provsim {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  int line;
};

enum class WorkloadKind { HTC, MTC };

// Batch job: submit/run in milliseconds of trace time, nodes are 1-CPU nodes.
struct JobRecord {
  int64_t job_id = 0;
  int64_t submit_ms = 0;
  int64_t run_ms = 0;
  int nodes = 1;
};

// Workflow task; deps are indices into the owning trace's task vector.
struct WorkflowTask {
  std::string id;
  std::string type;
  int64_t run_ms = 0;
  int nodes = 1;
  std::vector<int> deps;
};

enum class RepetitionMode { None, OnCompletion, Interval };

struct Repetition {
  RepetitionMode mode = RepetitionMode::None;
  int64_t horizon_ms = 0;
  int64_t interval_ms = 0;  // Interval mode: spawn every interval_ms
};

struct WorkloadTrace {
  WorkloadKind kind = WorkloadKind::HTC;
  std::vector<JobRecord> jobs;      // HTC payload
  std::vector<WorkflowTask> tasks;  // MTC payload
  int64_t duration_ms = 0;
  int max_demand = 0;
  Repetition repetition;
  int skipped_records = 0;  // invalid records dropped by the parser

  size_t job_count() const {
    return kind == WorkloadKind::HTC ? jobs.size() : tasks.size();
  }
};

struct TimeRescale {
  int64_t speedup_factor = 1;
};

// Standard workload format: whitespace-separated fields, ';' comments.
// Field 2 is the submission time, field 4 the run time, field 8 the
// requested processor count (field 5 when 8 is -1).  Records with
// non-positive run time or node count are dropped and counted.
WorkloadTrace parse_swf(std::istream& in);
WorkloadTrace parse_swf_file(const std::string& path);
std::string serialize_swf(const WorkloadTrace& trace);

// Workflow format: "task_id task_type run_time_seconds dep[,dep...]" with
// '-' for no dependencies.  The dependency graph must be acyclic.
WorkloadTrace parse_workflow(std::istream& in);
WorkloadTrace parse_workflow_file(const std::string& path);
std::string serialize_workflow(const WorkloadTrace& trace);

// Keeps jobs with start <= submit < start + length, rebased to 0.
WorkloadTrace extract_window(const WorkloadTrace& trace, int64_t start_ms,
                             int64_t length_ms);

// Divides submit/run/duration by the factor at millisecond resolution;
// run times are floored at 1 ms.
WorkloadTrace rescale_time(const WorkloadTrace& trace, const TimeRescale& r);

// Marks an MTC trace for back-to-back repetition: a fresh instance is
// submitted at t=0 and on each instance's final completion, until horizon.
WorkloadTrace plan_repetition(const WorkloadTrace& trace, int64_t horizon_ms);

// Periodic variant: instances spawn at 0, interval, 2*interval, ... < horizon.
WorkloadTrace plan_repetition_interval(const WorkloadTrace& trace,
                                       int64_t horizon_ms, int64_t interval_ms);

// Returns every invariant violation (ordering, field ranges, cycles,
// dangling deps) without mutating the trace.
std::vector<std::string> validate_trace(const WorkloadTrace& trace);

// Kahn-style peeling; throws SimError naming a cycle member if none exists.
std::vector<int> topological_order(const WorkloadTrace& trace);

// Queue-demand statistics of an MTC workload run at its natural width:
// ra = demand of the initially ready frontier, rm = the largest
// dependency-level demand (the biggest burst the queue can ever see).
struct MtcEmpiricals {
  int64_t ra = 0;
  int64_t rm = 0;
};
MtcEmpiricals compute_mtc_empiricals(const WorkloadTrace& trace);

}  // namespace provsim

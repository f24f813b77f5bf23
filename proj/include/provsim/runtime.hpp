#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "provsim/elasticity.hpp"
#include "provsim/metrics.hpp"
#include "provsim/sim_core.hpp"
#include "provsim/trace.hpp"

namespace provsim {

enum class LifecycleState { Inexistent, Planning, Created, Running, Destroyed };
const char* lifecycle_state_name(LifecycleState state);

// Audit record per job (HTC) or per workflow task instance (MTC).
// Times are original (unscaled) ms; -1 means "did not happen".
struct JobOutcome {
  std::string id;
  int64_t submit_ms = 0;
  int64_t start_ms = -1;
  int64_t complete_ms = -1;
  int64_t nodes = 0;
  bool completed = false;
};

// `job_id submit start complete nodes state` lines, original-time seconds.
std::string outcomes_to_text(const std::vector<JobOutcome>& outcomes);

struct MtcStats {
  int64_t instances_spawned = 0;
  int64_t tasks_completed = 0;
  // Sum over instances of min(last task completion, horizon) - spawn time,
  // original ms; the throughput denominator.
  int64_t active_ms = 0;
};

// A thin runtime environment: one provider's queue, scheduler, and resource
// holding, driven entirely by engine events.  Works in scaled time
// internally; everything reported is converted back to original time.
class RuntimeEnv {
 public:
  RuntimeEnv(int env_id, std::string name, ElasticityPolicy policy,
             const WorkloadTrace* trace, int64_t scheduler_cycle_ms,
             TimeRescale rescale, int64_t horizon_ms, Engine* engine,
             ProvisionService* service, ConsumptionLedger* ledger);

  // Event entry points; the scenario runner fans engine handlers out here.
  // Payload conventions: JobSubmit a=job (HTC) or a=instance (MTC);
  // JobComplete a=job/instance, b=task or -1; LeaseTimerTick a=lease id.
  void on_create(const Event& ev);
  void on_submit(const Event& ev);
  void on_complete(const Event& ev);
  void on_scheduler_tick(const Event& ev);
  void on_lease_tick(const Event& ev);
  void on_destroy(const Event& ev);

  LifecycleState state() const { return state_; }
  int env_id() const { return env_id_; }
  const std::string& name() const { return name_; }
  WorkloadKind kind() const { return trace_->kind; }
  const ElasticityPolicy& policy() const { return policy_; }

  int64_t initial_nodes() const { return initial_; }
  int64_t dynamic_nodes() const;
  int64_t owned_total() const { return initial_ + dynamic_nodes(); }
  int64_t occupied() const { return occupied_; }
  int64_t free_nodes() const { return owned_total() - occupied_; }
  QueueSnapshot queue_snapshot() const;
  int64_t queue_length() const;
  std::vector<DynamicLease> leases() const;  // snapshot, grant order

  int64_t completed_count() const { return completed_; }
  int64_t unfinished_count() const { return unfinished_; }
  const std::vector<JobOutcome>& outcomes() const { return outcomes_; }
  const MtcStats& mtc_stats() const { return mtc_; }

 private:
  struct ActiveLease {
    DynamicLease lease;
    SimTime next_tick = -1;  // scaled; -1 once the timer is deregistered
  };
  struct Instance {
    SimTime spawn = 0;  // scaled
    SimTime last_complete = -1;
    int64_t remaining = 0;  // tasks not yet completed
    int64_t outcome_base = 0;
    std::vector<int32_t> waiting;  // unmet dep count per task
  };

  SimTime scaled(int64_t original_ms) const;
  SimTime scaled_run(int64_t original_ms) const;
  int64_t original(SimTime scaled_ms) const;
  SimTime now() const { return engine_->clock(); }

  // Tick grid = multiples of the scheduler cycle plus, under the dynamic
  // regime, multiples of the checking cycle S.  `allow_now` is true only
  // when arming from an event class that dispatches before SchedulerTick.
  void arm_tick(bool allow_now);
  SimTime next_grid_point(SimTime at_or_after) const;
  bool has_pending_work() const;

  void run_elasticity_check();
  void run_scheduling_pass();
  void start_htc_job(int32_t job);
  void start_mtc_task(int32_t instance, int32_t task);
  void spawn_instance(int32_t index);
  void complete_task_inline(int32_t instance, int32_t task);
  void set_holding();
  void grant_dynamic(int64_t nodes);
  // Releases `count` nodes from `al` and bills the chunk for its held time.
  void release_chunk(ActiveLease& al, int64_t count);

  int env_id_;
  std::string name_;
  ElasticityPolicy policy_;
  const WorkloadTrace* trace_;
  TimeRescale rescale_;
  Engine* engine_;
  ProvisionService* service_;
  ConsumptionLedger* ledger_;

  SimTime cycle_scaled_;
  SimTime check_scaled_;
  SimTime lease_unit_scaled_;
  int64_t horizon_ms_;
  SimTime horizon_scaled_;

  LifecycleState state_ = LifecycleState::Inexistent;
  SimTime created_at_ = 0;
  int64_t initial_ = 0;
  int64_t occupied_ = 0;
  std::vector<ActiveLease> leases_;
  int64_t next_lease_id_ = 0;

  // HTC pending queue in arrival order / MTC ready queue in readiness order.
  std::deque<int32_t> queue_;
  std::deque<std::pair<int32_t, int32_t>> ready_;
  std::vector<Instance> instances_;
  std::vector<std::vector<int32_t>> children_;  // task adjacency, MTC
  std::vector<int32_t> indegree_;

  SimTime armed_ = -1;           // earliest scheduled tick, -1 = none
  SimTime last_tick_ = -1;       // timestamp of the last processed tick
  int64_t running_count_ = 0;
  int64_t completed_ = 0;
  int64_t unfinished_ = 0;
  std::vector<JobOutcome> outcomes_;
  MtcStats mtc_;
};

}  // namespace provsim

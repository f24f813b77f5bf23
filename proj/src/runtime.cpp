#include "provsim/runtime.hpp"

#include <algorithm>
#include <cstdio>

namespace provsim {

namespace {

void append_outcome_seconds(std::string* out, int64_t ms) {
  char buf[48];
  if (ms < 0) {
    *out += "-1";
  } else if (ms % kMsPerSecond == 0) {
    std::snprintf(buf, sizeof(buf), "%lld",
                  static_cast<long long>(ms / kMsPerSecond));
    *out += buf;
  } else {
    std::snprintf(buf, sizeof(buf), "%.3f", static_cast<double>(ms) / 1000.0);
    *out += buf;
  }
}

}  // namespace

const char* lifecycle_state_name(LifecycleState state) {
  switch (state) {
    case LifecycleState::Inexistent:
      return "inexistent";
    case LifecycleState::Planning:
      return "planning";
    case LifecycleState::Created:
      return "created";
    case LifecycleState::Running:
      return "running";
    case LifecycleState::Destroyed:
      return "destroyed";
  }
  return "unknown";
}

std::string outcomes_to_text(const std::vector<JobOutcome>& outcomes) {
  std::string out;
  for (const JobOutcome& oc : outcomes) {
    out += oc.id;
    out += ' ';
    append_outcome_seconds(&out, oc.submit_ms);
    out += ' ';
    append_outcome_seconds(&out, oc.start_ms);
    out += ' ';
    append_outcome_seconds(&out, oc.complete_ms);
    out += ' ';
    out += std::to_string(oc.nodes);
    out += ' ';
    out += oc.completed ? "completed" : "unfinished";
    out += '\n';
  }
  return out;
}

RuntimeEnv::RuntimeEnv(int env_id, std::string name, ElasticityPolicy policy,
                       const WorkloadTrace* trace, int64_t scheduler_cycle_ms,
                       TimeRescale rescale, int64_t horizon_ms, Engine* engine,
                       ProvisionService* service, ConsumptionLedger* ledger)
    : env_id_(env_id),
      name_(std::move(name)),
      policy_(policy),
      trace_(trace),
      rescale_(rescale),
      engine_(engine),
      service_(service),
      ledger_(ledger),
      horizon_ms_(horizon_ms) {
  std::string bad = policy_.validate();
  if (!bad.empty()) throw SimError(name_ + ": " + bad);
  if (rescale_.speedup_factor <= 0) {
    throw SimError(name_ + ": speedup factor must be positive");
  }
  if (scheduler_cycle_ms <= 0) {
    throw SimError(name_ + ": scheduler cycle must be positive");
  }
  if (horizon_ms_ <= 0) throw SimError(name_ + ": horizon must be positive");
  cycle_scaled_ = std::max<SimTime>(1, scaled(scheduler_cycle_ms));
  check_scaled_ = std::max<SimTime>(1, scaled(policy_.check_cycle_ms));
  lease_unit_scaled_ = std::max<SimTime>(1, scaled(policy_.lease_unit_ms));
  horizon_scaled_ = scaled(horizon_ms_);
  if (trace_->kind == WorkloadKind::MTC) {
    const int n = static_cast<int>(trace_->tasks.size());
    children_.resize(n);
    indegree_.assign(n, 0);
    for (int t = 0; t < n; ++t) {
      for (int d : trace_->tasks[t].deps) {
        if (d < 0 || d >= n) {
          throw SimError(name_ + ": task '" + trace_->tasks[t].id +
                         "' has an out-of-range dependency");
        }
        children_[d].push_back(t);
        indegree_[t]++;
      }
    }
  }
}

SimTime RuntimeEnv::scaled(int64_t original_ms) const {
  return original_ms / rescale_.speedup_factor;
}

SimTime RuntimeEnv::scaled_run(int64_t original_ms) const {
  return std::max<SimTime>(1, original_ms / rescale_.speedup_factor);
}

int64_t RuntimeEnv::original(SimTime scaled_ms) const {
  return scaled_ms * rescale_.speedup_factor;
}

int64_t RuntimeEnv::dynamic_nodes() const {
  int64_t total = 0;
  for (const ActiveLease& al : leases_) total += al.lease.size;
  return total;
}

int64_t RuntimeEnv::queue_length() const {
  return static_cast<int64_t>(queue_.size() + ready_.size());
}

std::vector<DynamicLease> RuntimeEnv::leases() const {
  std::vector<DynamicLease> out;
  out.reserve(leases_.size());
  for (const ActiveLease& al : leases_) out.push_back(al.lease);
  return out;
}

QueueSnapshot RuntimeEnv::queue_snapshot() const {
  QueueSnapshot snap;
  if (trace_->kind == WorkloadKind::HTC) {
    for (int32_t j : queue_) {
      const JobRecord& job = trace_->jobs[j];
      snap.total_demand += job.nodes;
      snap.biggest_job = std::max<int64_t>(snap.biggest_job, job.nodes);
    }
  } else {
    for (const auto& [inst, task] : ready_) {
      const WorkflowTask& t = trace_->tasks[task];
      snap.total_demand += t.nodes;
      snap.biggest_job = std::max<int64_t>(snap.biggest_job, t.nodes);
    }
  }
  return snap;
}

void RuntimeEnv::on_create(const Event& ev) {
  if (state_ != LifecycleState::Inexistent) {
    throw SimError(name_ + ": create from state " +
                   lifecycle_state_name(state_));
  }
  state_ = LifecycleState::Planning;
  created_at_ = ev.time;
  initial_ = policy_.regime == Regime::PerJob ? 0 : policy_.initial_nodes;
  state_ = LifecycleState::Created;
  if (initial_ > 0 &&
      (policy_.leased || policy_.regime == Regime::Dynamic)) {
    service_->provision(original(now()), env_id_, static_cast<int>(initial_),
                        AdjustCause::Initial);
    ledger_->record_adjustment(
        {original(now()), env_id_, static_cast<int>(initial_),
         AdjustCause::Initial});
  }
  state_ = LifecycleState::Running;
  set_holding();
  if (trace_->kind == WorkloadKind::HTC) {
    outcomes_.resize(trace_->jobs.size());
    for (size_t j = 0; j < trace_->jobs.size(); ++j) {
      const JobRecord& job = trace_->jobs[j];
      JobOutcome& oc = outcomes_[j];
      oc.id = std::to_string(job.job_id);
      oc.submit_ms = job.submit_ms;
      oc.nodes = job.nodes;
      engine_->schedule(scaled(job.submit_ms), EventKind::JobSubmit, env_id_,
                        static_cast<int64_t>(j));
    }
    return;
  }
  switch (trace_->repetition.mode) {
    case RepetitionMode::None:
    case RepetitionMode::OnCompletion:
      engine_->schedule(now(), EventKind::JobSubmit, env_id_, 0);
      break;
    case RepetitionMode::Interval: {
      int64_t index = 0;
      for (int64_t t = 0; t < trace_->repetition.horizon_ms;
           t += trace_->repetition.interval_ms) {
        engine_->schedule(scaled(t), EventKind::JobSubmit, env_id_, index++);
      }
      break;
    }
  }
}

void RuntimeEnv::on_submit(const Event& ev) {
  if (state_ != LifecycleState::Running) {
    throw SimError(name_ + ": submit into state " +
                   lifecycle_state_name(state_));
  }
  if (trace_->kind == WorkloadKind::HTC) {
    int32_t j = static_cast<int32_t>(ev.a);
    if (policy_.regime == Regime::PerJob) {
      start_htc_job(j);
      return;
    }
    queue_.push_back(j);
    arm_tick(false);
    return;
  }
  spawn_instance(static_cast<int32_t>(ev.a));
  if (policy_.regime != Regime::PerJob) arm_tick(false);
}

void RuntimeEnv::spawn_instance(int32_t index) {
  if (static_cast<int32_t>(instances_.size()) != index) {
    throw SimError(name_ + ": instance " + std::to_string(index) +
                   " spawned out of order");
  }
  Instance inst;
  inst.spawn = now();
  inst.remaining = static_cast<int64_t>(trace_->tasks.size());
  inst.outcome_base = static_cast<int64_t>(outcomes_.size());
  inst.waiting = indegree_;
  instances_.push_back(std::move(inst));
  mtc_.instances_spawned++;
  const int64_t submit_orig = original(now());
  char id[96];
  for (size_t t = 0; t < trace_->tasks.size(); ++t) {
    JobOutcome oc;
    std::snprintf(id, sizeof(id), "w%d.%s", index,
                  trace_->tasks[t].id.c_str());
    oc.id = id;
    oc.submit_ms = submit_orig;
    oc.nodes = trace_->tasks[t].nodes;
    outcomes_.push_back(std::move(oc));
  }
  // the initially ready frontier enters the queue in task order
  for (size_t t = 0; t < trace_->tasks.size(); ++t) {
    if (indegree_[t] == 0) {
      if (policy_.regime == Regime::PerJob) {
        start_mtc_task(index, static_cast<int32_t>(t));
      } else {
        ready_.emplace_back(index, static_cast<int32_t>(t));
      }
    }
  }
}

void RuntimeEnv::on_complete(const Event& ev) {
  if (state_ != LifecycleState::Running) {
    throw SimError(name_ + ": completion in state " +
                   lifecycle_state_name(state_));
  }
  if (trace_->kind == WorkloadKind::MTC) {
    complete_task_inline(static_cast<int32_t>(ev.a),
                         static_cast<int32_t>(ev.b));
    return;
  }
  int32_t j = static_cast<int32_t>(ev.a);
  const JobRecord& job = trace_->jobs[j];
  occupied_ -= job.nodes;
  running_count_--;
  JobOutcome& oc = outcomes_[j];
  oc.complete_ms = original(now());
  oc.completed = true;
  completed_++;
  if (policy_.regime == Regime::PerJob) {
    int64_t billed =
        billed_duration_ms(oc.complete_ms - oc.start_ms, policy_.lease_unit_ms);
    ledger_->accrue_usage(env_id_, job.nodes, billed);
    service_->reclaim(oc.complete_ms, env_id_, job.nodes, AdjustCause::PerJob);
    ledger_->record_adjustment(
        {oc.complete_ms, env_id_, -job.nodes, AdjustCause::PerJob});
    set_holding();
  } else {
    // freed nodes must be visible to a scheduling pass at this timestamp
    arm_tick(true);
  }
}

void RuntimeEnv::complete_task_inline(int32_t instance, int32_t task) {
  const WorkflowTask& t = trace_->tasks[task];
  occupied_ -= t.nodes;
  running_count_--;
  Instance& inst = instances_[instance];
  JobOutcome& oc = outcomes_[inst.outcome_base + task];
  oc.complete_ms = original(now());
  oc.completed = true;
  completed_++;
  mtc_.tasks_completed++;
  inst.remaining--;
  inst.last_complete = now();
  for (int32_t ch : children_[task]) {
    if (--inst.waiting[ch] == 0) {
      if (policy_.regime == Regime::PerJob) {
        start_mtc_task(instance, ch);
      } else {
        ready_.emplace_back(instance, ch);
      }
    }
  }
  if (policy_.regime == Regime::PerJob) {
    int64_t billed =
        billed_duration_ms(oc.complete_ms - oc.start_ms, policy_.lease_unit_ms);
    ledger_->accrue_usage(env_id_, t.nodes, billed);
    service_->reclaim(oc.complete_ms, env_id_, t.nodes, AdjustCause::PerJob);
    ledger_->record_adjustment(
        {oc.complete_ms, env_id_, -t.nodes, AdjustCause::PerJob});
    set_holding();
  } else {
    arm_tick(true);
  }
  if (inst.remaining == 0 &&
      trace_->repetition.mode == RepetitionMode::OnCompletion &&
      original(now()) < trace_->repetition.horizon_ms) {
    engine_->schedule(now(), EventKind::JobSubmit, env_id_,
                      static_cast<int64_t>(instances_.size()));
  }
}

void RuntimeEnv::on_scheduler_tick(const Event& ev) {
  if (state_ != LifecycleState::Running) return;
  const SimTime t = ev.time;
  if (t == last_tick_) return;  // duplicate arming for this grid point
  last_tick_ = t;
  if (armed_ == t) armed_ = -1;
  // the elasticity check runs before the scheduling pass within a tick
  if (policy_.regime == Regime::Dynamic && t % check_scaled_ == 0) {
    run_elasticity_check();
  }
  if (t % cycle_scaled_ == 0) {
    run_scheduling_pass();
  }
  arm_tick(false);
}

void RuntimeEnv::run_elasticity_check() {
  QueueSnapshot snap = queue_snapshot();
  std::optional<int64_t> dr = evaluate_demand(snap, owned_total(), policy_);
  if (dr) grant_dynamic(*dr);
}

void RuntimeEnv::grant_dynamic(int64_t nodes) {
  service_->provision(original(now()), env_id_, static_cast<int>(nodes),
                      AdjustCause::DynamicGrant);
  ledger_->record_adjustment({original(now()), env_id_,
                              static_cast<int>(nodes),
                              AdjustCause::DynamicGrant});
  ActiveLease al;
  al.lease.id = next_lease_id_++;
  al.lease.size = static_cast<int>(nodes);
  al.lease.outstanding = static_cast<int>(nodes);
  al.lease.granted_at = now();
  al.next_tick = now() + lease_unit_scaled_;
  engine_->schedule(al.next_tick, EventKind::LeaseTimerTick, env_id_,
                    al.lease.id);
  leases_.push_back(al);
  set_holding();
}

void RuntimeEnv::run_scheduling_pass() {
  if (trace_->kind == WorkloadKind::HTC) {
    // First-fit over the queue in arrival order.  Free capacity only
    // shrinks during the walk, so one pass reaches the fixpoint.
    size_t i = 0;
    while (i < queue_.size()) {
      const JobRecord& job = trace_->jobs[queue_[i]];
      if (job.nodes <= free_nodes()) {
        int32_t j = queue_[i];
        queue_.erase(queue_.begin() + i);
        start_htc_job(j);
      } else {
        ++i;
      }
    }
    return;
  }
  // FCFS: tasks start strictly in readiness order, no skipping past the head.
  while (!ready_.empty()) {
    auto [inst, task] = ready_.front();
    if (trace_->tasks[task].nodes > free_nodes()) break;
    ready_.pop_front();
    start_mtc_task(inst, task);
  }
}

void RuntimeEnv::start_htc_job(int32_t job_index) {
  const JobRecord& job = trace_->jobs[job_index];
  if (policy_.regime != Regime::PerJob &&
      occupied_ + job.nodes > owned_total()) {
    throw SimError(name_ + ": job started beyond capacity");
  }
  JobOutcome& oc = outcomes_[job_index];
  oc.start_ms = original(now());
  occupied_ += job.nodes;
  running_count_++;
  if (policy_.regime == Regime::PerJob) {
    service_->provision(oc.start_ms, env_id_, job.nodes, AdjustCause::PerJob);
    ledger_->record_adjustment(
        {oc.start_ms, env_id_, job.nodes, AdjustCause::PerJob});
    set_holding();
  }
  engine_->schedule(now() + scaled_run(job.run_ms), EventKind::JobComplete,
                    env_id_, job_index, -1);
}

void RuntimeEnv::start_mtc_task(int32_t instance, int32_t task) {
  const WorkflowTask& t = trace_->tasks[task];
  if (policy_.regime != Regime::PerJob &&
      occupied_ + t.nodes > owned_total()) {
    throw SimError(name_ + ": task started beyond capacity");
  }
  Instance& inst = instances_[instance];
  JobOutcome& oc = outcomes_[inst.outcome_base + task];
  oc.start_ms = original(now());
  occupied_ += t.nodes;
  running_count_++;
  if (policy_.regime == Regime::PerJob) {
    service_->provision(oc.start_ms, env_id_, t.nodes, AdjustCause::PerJob);
    ledger_->record_adjustment(
        {oc.start_ms, env_id_, t.nodes, AdjustCause::PerJob});
    set_holding();
  }
  engine_->schedule(now() + scaled_run(t.run_ms), EventKind::JobComplete,
                    env_id_, instance, task);
}

void RuntimeEnv::on_lease_tick(const Event& ev) {
  if (state_ != LifecycleState::Running) return;
  const SimTime t = ev.time;
  // Process every lease due now, oldest grant first, so release capacity is
  // attributed to the grant that has been held longest.  Coincident timer
  // events for leases handled here no-op on the next_tick mismatch.
  for (ActiveLease& al : leases_) {
    if (al.next_tick != t) continue;
    int64_t idle_dynamic = std::min(free_nodes(), dynamic_nodes());
    ReleaseDecision d = release_tick(al.lease, idle_dynamic);
    if (d.release_now > 0) release_chunk(al, d.release_now);
    al.lease.outstanding = d.outstanding_after;
    if (d.deregister_timer) {
      al.next_tick = -1;
    } else {
      al.next_tick = t + lease_unit_scaled_;
      engine_->schedule(al.next_tick, EventKind::LeaseTimerTick, env_id_,
                        al.lease.id);
    }
  }
  leases_.erase(std::remove_if(leases_.begin(), leases_.end(),
                               [](const ActiveLease& al) {
                                 return al.lease.size == 0 &&
                                        al.next_tick == -1;
                               }),
                leases_.end());
}

void RuntimeEnv::release_chunk(ActiveLease& al, int64_t count) {
  int64_t held_orig = original(now() - al.lease.granted_at);
  ledger_->accrue_usage(env_id_, count,
                        billed_duration_ms(held_orig, policy_.lease_unit_ms));
  service_->reclaim(original(now()), env_id_, static_cast<int>(count),
                    AdjustCause::Release);
  ledger_->record_adjustment({original(now()), env_id_,
                              -static_cast<int>(count), AdjustCause::Release});
  al.lease.size -= static_cast<int>(count);
  set_holding();
}

void RuntimeEnv::on_destroy(const Event& ev) {
  if (state_ != LifecycleState::Running) {
    throw SimError(name_ + ": destroy from state " +
                   lifecycle_state_name(state_));
  }
  (void)ev;
  const int64_t t_orig = original(now());
  for (const JobOutcome& oc : outcomes_) {
    if (!oc.completed) unfinished_++;
  }
  if (trace_->kind == WorkloadKind::MTC) {
    for (const Instance& inst : instances_) {
      int64_t end =
          inst.remaining == 0 ? original(inst.last_complete) : horizon_ms_;
      mtc_.active_ms += end - original(inst.spawn);
    }
  }
  // initial resources are held from creation to teardown
  if (initial_ > 0) {
    ledger_->accrue_usage(env_id_, initial_, t_orig - original(created_at_));
  }
  // live grants and running per-job leases are billed to this instant
  for (const ActiveLease& al : leases_) {
    if (al.lease.size <= 0) continue;
    int64_t held_orig = t_orig - original(al.lease.granted_at);
    ledger_->accrue_usage(
        env_id_, al.lease.size,
        billed_duration_ms(held_orig, policy_.lease_unit_ms));
  }
  if (policy_.regime == Regime::PerJob) {
    for (const JobOutcome& oc : outcomes_) {
      if (oc.start_ms < 0 || oc.completed) continue;
      ledger_->accrue_usage(
          env_id_, oc.nodes,
          billed_duration_ms(t_orig - oc.start_ms, policy_.lease_unit_ms));
      service_->reclaim(t_orig, env_id_, static_cast<int>(oc.nodes),
                        AdjustCause::Destroy);
      ledger_->record_adjustment({t_orig, env_id_,
                                  -static_cast<int>(oc.nodes),
                                  AdjustCause::Destroy});
    }
  }
  int64_t reclaim_total = 0;
  if (policy_.regime == Regime::Dynamic) {
    reclaim_total = initial_ + dynamic_nodes();
  } else if (policy_.regime == Regime::Static && policy_.leased) {
    reclaim_total = initial_;
  }
  if (reclaim_total > 0) {
    service_->reclaim(t_orig, env_id_, static_cast<int>(reclaim_total),
                      AdjustCause::Destroy);
    ledger_->record_adjustment({t_orig, env_id_,
                                -static_cast<int>(reclaim_total),
                                AdjustCause::Destroy});
  }
  state_ = LifecycleState::Destroyed;
  set_holding();
}

void RuntimeEnv::set_holding() {
  int64_t holding = 0;
  if (state_ == LifecycleState::Running) {
    holding =
        policy_.regime == Regime::PerJob ? occupied_ : initial_ + dynamic_nodes();
  }
  ledger_->set_holding(env_id_, holding);
}

bool RuntimeEnv::has_pending_work() const {
  return !queue_.empty() || !ready_.empty();
}

SimTime RuntimeEnv::next_grid_point(SimTime at_or_after) const {
  auto next_multiple = [](SimTime t, SimTime unit) {
    return (t + unit - 1) / unit * unit;
  };
  SimTime next = next_multiple(at_or_after, cycle_scaled_);
  if (policy_.regime == Regime::Dynamic) {
    next = std::min(next, next_multiple(at_or_after, check_scaled_));
  }
  return next;
}

void RuntimeEnv::arm_tick(bool allow_now) {
  if (policy_.regime == Regime::PerJob) return;
  if (state_ != LifecycleState::Running) return;
  if (!has_pending_work()) return;
  SimTime target = next_grid_point(allow_now ? now() : now() + 1);
  if (armed_ >= 0 && armed_ <= target) return;
  engine_->schedule(target, EventKind::SchedulerTick, env_id_);
  armed_ = target;
}

}  // namespace provsim

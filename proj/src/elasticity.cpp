#include "provsim/elasticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "provsim/sim_core.hpp"

namespace provsim {

const char* regime_name(Regime r, bool leased) {
  switch (r) {
    case Regime::Static:
      return leased ? "static_leased" : "static";
    case Regime::PerJob:
      return "per_job";
    case Regime::Dynamic:
      return "dynamic";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(const std::string& name, bool* leased) {
  bool l = false;
  std::optional<Regime> r;
  if (name == "static" || name == "static_owned") {
    r = Regime::Static;
  } else if (name == "static_leased") {
    r = Regime::Static;
    l = true;
  } else if (name == "per_job" || name == "per-job") {
    r = Regime::PerJob;
  } else if (name == "dynamic") {
    r = Regime::Dynamic;
  }
  if (r && leased) *leased = l;
  return r;
}

std::string ElasticityPolicy::validate() const {
  if (initial_nodes < 0) return "initial node count must be non-negative";
  if (regime == Regime::PerJob && initial_nodes != 0) {
    return "per-job leasing takes no initial nodes";
  }
  if (lease_unit_ms <= 0) return "lease unit must be positive";
  if (regime == Regime::Dynamic) {
    if (check_cycle_ms <= 0) return "checking cycle must be positive";
    if (!threshold_infinite && threshold_milli < 1000) {
      return "threshold ratio must be at least 1";
    }
  }
  return std::string();
}

double ratio_of_obtaining(int64_t queued_demand, int64_t owned_total) {
  if (queued_demand <= 0) return 0.0;
  if (owned_total <= 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(queued_demand) / static_cast<double>(owned_total);
}

bool ratio_exceeds_threshold(int64_t queued_demand, int64_t owned_total,
                             const ElasticityPolicy& policy) {
  if (queued_demand <= 0) return false;
  if (policy.threshold_infinite) return false;
  if (owned_total <= 0) return true;
  // queued / owned > milli / 1000, cross-multiplied to stay integral
  return queued_demand * 1000 > policy.threshold_milli * owned_total;
}

std::optional<int64_t> evaluate_demand(const QueueSnapshot& queue,
                                       int64_t owned_total,
                                       const ElasticityPolicy& policy) {
  if (policy.regime != Regime::Dynamic) return std::nullopt;
  bool trigger = ratio_exceeds_threshold(queue.total_demand, owned_total,
                                         policy) ||
                 queue.biggest_job > owned_total;
  if (!trigger) return std::nullopt;
  int64_t dr = std::max<int64_t>(queue.total_demand - owned_total, 0);
  if (dr == 0) return std::nullopt;
  return dr;
}

ReleaseDecision release_tick(const DynamicLease& lease,
                             int64_t idle_dynamic) {
  ReleaseDecision d;
  int64_t idle = std::max<int64_t>(idle_dynamic, 0);
  d.release_now =
      static_cast<int>(std::min<int64_t>(idle, lease.outstanding));
  d.outstanding_after = lease.outstanding - d.release_now;
  d.deregister_timer = d.outstanding_after == 0;
  return d;
}

int64_t billed_duration_ms(int64_t held_ms, int64_t lease_unit_ms) {
  if (lease_unit_ms <= 0) throw SimError("lease unit must be positive");
  if (held_ms <= 0) return 0;
  return (held_ms + lease_unit_ms - 1) / lease_unit_ms * lease_unit_ms;
}

const char* adjust_cause_name(AdjustCause c) {
  switch (c) {
    case AdjustCause::Initial:
      return "initial";
    case AdjustCause::DynamicGrant:
      return "dynamic_grant";
    case AdjustCause::Release:
      return "release";
    case AdjustCause::Destroy:
      return "destroy";
    case AdjustCause::PerJob:
      return "per_job";
  }
  return "unknown";
}

void ProvisionService::provision(int64_t time_ms, int env, int nodes,
                                 AdjustCause cause) {
  if (nodes <= 0) throw SimError("provision of a non-positive node count");
  granted_total_ += nodes;
  log_.push_back({time_ms, env, nodes, cause});
}

void ProvisionService::reclaim(int64_t time_ms, int env, int nodes,
                               AdjustCause cause) {
  if (nodes <= 0) throw SimError("reclaim of a non-positive node count");
  if (nodes > granted_total_) {
    throw SimError("reclaim exceeds the granted total");
  }
  granted_total_ -= nodes;
  log_.push_back({time_ms, env, -nodes, cause});
}

}  // namespace provsim

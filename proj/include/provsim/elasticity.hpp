#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace provsim {

enum class Regime { Static, PerJob, Dynamic };

const char* regime_name(Regime r, bool leased);
std::optional<Regime> parse_regime(const std::string& name, bool* leased);

// B/R/S/C tuple plus the regime selector.  R is kept as an exact
// milli-ratio (1500 = 1.5) so trigger comparisons stay integral.
struct ElasticityPolicy {
  Regime regime = Regime::Static;
  int initial_nodes = 0;           // B, or the static capacity
  bool leased = false;             // static only: fixed lease vs owned
  bool threshold_infinite = false; // R = +inf
  int64_t threshold_milli = 1500;  // R * 1000
  int64_t check_cycle_ms = 60'000;      // S
  int64_t lease_unit_ms = 3'600'000;    // C

  // Empty string when valid, else the first violated constraint.
  std::string validate() const;
};

// Accumulated queue demand / owned, as a double for reporting only.
// Conventions: 0 for an empty queue, +inf for owned = 0 with work queued.
double ratio_of_obtaining(int64_t queued_demand, int64_t owned_total);

// Exact integral form of "ratio > R" (cross-multiplied), honoring the
// +inf conventions on both sides.
bool ratio_exceeds_threshold(int64_t queued_demand, int64_t owned_total,
                             const ElasticityPolicy& policy);

struct QueueSnapshot {
  int64_t total_demand = 0;
  int64_t biggest_job = 0;
};

// The acquisition rule: request DR = max(total demand - owned, 0) nodes
// iff ratio > R or the biggest queued job exceeds what is owned.
// Returns nullopt when no request should be made.
std::optional<int64_t> evaluate_demand(const QueueSnapshot& queue,
                                       int64_t owned_total,
                                       const ElasticityPolicy& policy);

// One grant of dynamic nodes.  outstanding tracks how many of them still
// have to be handed back; the grant's timer lives while outstanding > 0.
struct DynamicLease {
  int64_t id = 0;
  int size = 0;
  int outstanding = 0;
  int64_t granted_at = 0;  // scaled ms
};

struct ReleaseDecision {
  int release_now = 0;
  int outstanding_after = 0;
  bool deregister_timer = false;
};

// Timer-tick rule: hand back min(idle dynamic nodes, outstanding); the
// timer dies exactly when outstanding reaches zero.
ReleaseDecision release_tick(const DynamicLease& lease, int64_t idle_dynamic);

// Billed duration of a lease interval: ceiling to whole lease units.
int64_t billed_duration_ms(int64_t held_ms, int64_t lease_unit_ms);

enum class AdjustCause { Initial, DynamicGrant, Release, Destroy, PerJob };

const char* adjust_cause_name(AdjustCause c);

struct AdjustmentRecord {
  int64_t time_ms = 0;  // original (unscaled) ms
  int env = -1;
  int delta_nodes = 0;  // positive = assigned, negative = reclaimed
  AdjustCause cause = AdjustCause::Initial;
};

// Provider-side provision service over an unbounded pool: grants are
// immediate and full, releases are passively reclaimed.
class ProvisionService {
 public:
  void provision(int64_t time_ms, int env, int nodes, AdjustCause cause);
  void reclaim(int64_t time_ms, int env, int nodes, AdjustCause cause);

  int64_t granted_total() const { return granted_total_; }
  const std::vector<AdjustmentRecord>& log() const { return log_; }

 private:
  int64_t granted_total_ = 0;
  std::vector<AdjustmentRecord> log_;
};

}  // namespace provsim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "provsim/elasticity.hpp"
#include "provsim/trace.hpp"

namespace provsim {

// Setup/teardown cost of adjusting a single node, in original-time ms.
constexpr int64_t kAdjustCostMsPerNode = 15'743;

// Per-environment billed consumption plus scenario-wide peak/overhead
// tracking.  All quantities are integer node*ms of original time, so
// accrual is exact and additive.
class ConsumptionLedger {
 public:
  explicit ConsumptionLedger(int env_count = 0);

  void accrue_usage(int env, int64_t nodes, int64_t interval_ms);
  void record_adjustment(const AdjustmentRecord& record);

  // Holdings drive peak sampling; call on every holding change.
  void set_holding(int env, int64_t nodes);

  int64_t billed_node_ms(int env) const { return billed_node_ms_[env]; }
  int64_t total_node_ms() const;
  int64_t env_peak_nodes(int env) const { return env_peak_[env]; }
  int64_t peak_nodes() const { return peak_; }
  int64_t adjustment_count() const { return adjustment_count_; }
  int64_t overhead_node_ms() const { return overhead_node_ms_; }
  int env_count() const { return static_cast<int>(billed_node_ms_.size()); }

 private:
  std::vector<int64_t> billed_node_ms_;
  std::vector<int64_t> holding_;
  std::vector<int64_t> env_peak_;
  int64_t holding_total_ = 0;
  int64_t peak_ = 0;
  int64_t adjustment_count_ = 0;
  int64_t overhead_node_ms_ = 0;
};

double node_ms_to_hours(int64_t node_ms);

struct ProviderReport {
  std::string name;
  WorkloadKind kind = WorkloadKind::HTC;
  std::string regime;
  int64_t completed_jobs = 0;
  int64_t unfinished_jobs = 0;
  double tasks_per_second = 0.0;  // MTC only
  int64_t rc_node_ms = 0;
  bool has_baseline = false;
  double saved_pct = 0.0;  // vs the named baseline provider's RC
  int64_t peak_nodes = 0;
  int64_t adjustments = 0;
  int64_t overhead_node_ms = 0;
};

struct MetricsReport {
  std::string scenario_name;
  std::vector<ProviderReport> providers;
  int64_t trc_node_ms = 0;
  int64_t peak_nodes = 0;
  int64_t adjustment_count = 0;
  int64_t overhead_node_ms = 0;
  int64_t window_ms = 0;
  bool has_baseline = false;
  double total_saved_pct = 0.0;

  const ProviderReport& provider(const std::string& name) const;
};

// Fixed CSV export: one row per provider plus a __total__ row.
std::string report_to_csv(const MetricsReport& report);
std::string reports_to_csv(const std::vector<MetricsReport>& reports);

// Currency amounts are parsed into exact micro-units; monthly figures come
// back as doubles only after the integral arithmetic is done.
struct TcoInputs {
  int64_t capex_u = 0;
  int64_t depreciation_months = 0;
  int64_t maintenance_u = 0;
  int64_t energy_space_per_month_u = 0;
  int64_t instances = 0;
  int64_t hours_u = 0;
  int64_t price_per_instance_hour_u = 0;
  int64_t inbound_gb_u = 0;
  int64_t price_per_gb_u = 0;
};

// Parses a decimal currency/quantity literal into micro-units, exactly.
int64_t parse_micro(const std::string& text);
double micro_to_double(int64_t micro);

// CapEx and maintenance amortized over the depreciation period, plus the
// monthly energy/space cost.
double tco_dedicated(const TcoInputs& in);

// instances * hours * hourly price + inbound GB * transfer price.
double tco_leased(const TcoInputs& in);

TcoInputs load_tco_inputs(const std::string& path);

}  // namespace provsim

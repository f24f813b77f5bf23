#include "provsim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "provsim/sim_core.hpp"

namespace provsim {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void append_provider_row(std::string* out, const std::string& scenario,
                         const ProviderReport& p) {
  *out += scenario;
  *out += ',';
  *out += p.name;
  *out += ',';
  *out += p.kind == WorkloadKind::HTC ? "htc" : "mtc";
  *out += ',';
  *out += p.regime;
  *out += ',';
  *out += std::to_string(p.completed_jobs);
  *out += ',';
  *out += std::to_string(p.unfinished_jobs);
  *out += ',';
  if (p.kind == WorkloadKind::MTC) *out += fmt_double(p.tasks_per_second);
  *out += ',';
  *out += fmt_double(node_ms_to_hours(p.rc_node_ms));
  *out += ',';
  if (p.has_baseline) *out += fmt_double(p.saved_pct);
  *out += ',';
  *out += std::to_string(p.peak_nodes);
  *out += ',';
  *out += std::to_string(p.adjustments);
  *out += ',';
  *out += fmt_double(node_ms_to_hours(p.overhead_node_ms));
  *out += '\n';
}

}  // namespace

ConsumptionLedger::ConsumptionLedger(int env_count)
    : billed_node_ms_(env_count, 0),
      holding_(env_count, 0),
      env_peak_(env_count, 0) {}

void ConsumptionLedger::accrue_usage(int env, int64_t nodes,
                                     int64_t interval_ms) {
  if (env < 0 || env >= env_count()) {
    throw SimError("usage accrued against an unknown environment");
  }
  if (nodes < 0 || interval_ms < 0) {
    throw SimError("usage accrual must be non-negative");
  }
  billed_node_ms_[env] += nodes * interval_ms;
}

void ConsumptionLedger::record_adjustment(const AdjustmentRecord& record) {
  if (record.delta_nodes == 0) {
    throw SimError("adjustment records must move at least one node");
  }
  adjustment_count_++;
  overhead_node_ms_ +=
      static_cast<int64_t>(std::abs(record.delta_nodes)) *
      kAdjustCostMsPerNode;
}

void ConsumptionLedger::set_holding(int env, int64_t nodes) {
  if (env < 0 || env >= env_count()) {
    throw SimError("holding set for an unknown environment");
  }
  if (nodes < 0) throw SimError("holdings cannot be negative");
  holding_total_ += nodes - holding_[env];
  holding_[env] = nodes;
  env_peak_[env] = std::max(env_peak_[env], nodes);
  peak_ = std::max(peak_, holding_total_);
}

int64_t ConsumptionLedger::total_node_ms() const {
  int64_t total = 0;
  for (int64_t v : billed_node_ms_) total += v;
  return total;
}

double node_ms_to_hours(int64_t node_ms) {
  return static_cast<double>(node_ms) / static_cast<double>(kMsPerHour);
}

const ProviderReport& MetricsReport::provider(const std::string& name) const {
  for (const ProviderReport& p : providers) {
    if (p.name == name) return p;
  }
  throw SimError("no provider named '" + name + "' in report");
}

std::string report_to_csv(const MetricsReport& report) {
  std::vector<MetricsReport> one{report};
  return reports_to_csv(one);
}

std::string reports_to_csv(const std::vector<MetricsReport>& reports) {
  std::string out =
      "scenario,provider,kind,regime,completed,unfinished,tasks_per_second,"
      "rc_node_hours,saved_pct,peak_nodes,adjustments,overhead_node_hours\n";
  for (const MetricsReport& report : reports) {
    int64_t completed = 0;
    int64_t unfinished = 0;
    for (const ProviderReport& p : report.providers) {
      append_provider_row(&out, report.scenario_name, p);
      completed += p.completed_jobs;
      unfinished += p.unfinished_jobs;
    }
    out += report.scenario_name;
    out += ",__total__,,,";
    out += std::to_string(completed);
    out += ',';
    out += std::to_string(unfinished);
    out += ",,";
    out += fmt_double(node_ms_to_hours(report.trc_node_ms));
    out += ',';
    if (report.has_baseline) out += fmt_double(report.total_saved_pct);
    out += ',';
    out += std::to_string(report.peak_nodes);
    out += ',';
    out += std::to_string(report.adjustment_count);
    out += ',';
    out += fmt_double(node_ms_to_hours(report.overhead_node_ms));
    out += '\n';
  }
  return out;
}

int64_t parse_micro(const std::string& text) {
  if (text.empty()) throw SimError("empty amount");
  size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  int64_t whole = 0;
  size_t digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    whole = whole * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  int64_t frac = 0;
  int frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_digits >= 6) {
        throw SimError("amount '" + text + "' has sub-micro precision");
      }
      frac = frac * 10 + (text[pos] - '0');
      ++frac_digits;
      ++pos;
      ++digits;
    }
  }
  if (pos != text.size() || digits == 0) {
    throw SimError("malformed amount '" + text + "'");
  }
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  int64_t micro = whole * 1'000'000 + frac;
  return negative ? -micro : micro;
}

double micro_to_double(int64_t micro) {
  return static_cast<double>(micro) / 1e6;
}

// Both costs are computed in integral nano-dollars so the published figures
// come out exact; only the final division produces a double.
double tco_dedicated(const TcoInputs& in) {
  if (in.depreciation_months <= 0) {
    throw SimError("depreciation period must be positive");
  }
  __int128 amortized_nano =
      (static_cast<__int128>(in.capex_u) + in.maintenance_u) * 1000 /
      in.depreciation_months;
  __int128 nano =
      amortized_nano + static_cast<__int128>(in.energy_space_per_month_u) * 1000;
  return static_cast<double>(static_cast<int64_t>(nano)) / 1e9;
}

double tco_leased(const TcoInputs& in) {
  __int128 compute_nano = static_cast<__int128>(in.instances) * in.hours_u *
                          in.price_per_instance_hour_u / 1'000;
  __int128 transfer_nano = static_cast<__int128>(in.inbound_gb_u) *
                           in.price_per_gb_u / 1'000;
  return static_cast<double>(static_cast<int64_t>(compute_nano +
                                                  transfer_nano)) /
         1e9;
}

TcoInputs load_tco_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError("cannot open cost file: " + path);
  TcoInputs t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    std::string key, value;
    if (eq != std::string::npos) {
      key = line.substr(0, eq);
      value = line.substr(eq + 1);
    } else {
      key = line;
    }
    auto trim = [](std::string& s) {
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                            s.back() == '\r')) {
        s.pop_back();
      }
      size_t b = s.find_first_not_of(" \t");
      s.erase(0, b == std::string::npos ? s.size() : b);
    };
    trim(key);
    trim(value);
    if (key.empty()) continue;
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", line_no);
    }
    if (key == "capex") {
      t.capex_u = parse_micro(value);
    } else if (key == "depreciation_months") {
      t.depreciation_months = parse_micro(value) / 1'000'000;
    } else if (key == "maintenance") {
      t.maintenance_u = parse_micro(value);
    } else if (key == "energy_space_per_month") {
      t.energy_space_per_month_u = parse_micro(value);
    } else if (key == "instances") {
      t.instances = parse_micro(value) / 1'000'000;
    } else if (key == "hours") {
      t.hours_u = parse_micro(value);
    } else if (key == "price_per_instance_hour") {
      t.price_per_instance_hour_u = parse_micro(value);
    } else if (key == "inbound_gb") {
      t.inbound_gb_u = parse_micro(value);
    } else if (key == "price_per_gb") {
      t.price_per_gb_u = parse_micro(value);
    } else {
      throw ParseError("unknown cost key '" + key + "'", line_no);
    }
  }
  return t;
}

}  // namespace provsim

#include "fogsim/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fogsim::harness {

std::vector<TaskRecord> task_records(const SimState& state) {
  std::vector<TaskRecord> out;
  out.reserve(state.finished.size());
  for (const auto& t : state.finished) {
    TaskRecord r;
    r.id = t.spec.id;
    r.app_class = t.spec.app_class;
    r.created_at = t.spec.created_at;
    r.finished_at = *t.finished_at;
    r.response = (r.finished_at - r.created_at + 1) * state.delta;
    r.sla_deadline = t.spec.sla_deadline;
    r.wait_intervals = t.wait_intervals;
    out.push_back(std::move(r));
  }
  return out;
}

double jain_index(const std::vector<double>& values) {
  if (values.empty()) return 1.0;
  double sum = 0.0, sum_sq = 0.0;
  for (const double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) return 1.0;
  const double n = static_cast<double>(values.size());
  return sum * sum / (n * sum_sq);
}

double compute_fairness(const std::vector<TaskRecord>& records) {
  std::vector<double> responses;
  responses.reserve(records.size());
  for (const auto& r : records) responses.push_back(r.response);
  return jain_index(responses);
}

double compute_slo_violations(const std::vector<TaskRecord>& records,
                              const std::map<std::string, double>& psi) {
  if (records.empty()) return 0.0;
  int violated = 0;
  for (const auto& r : records) {
    const auto it = psi.find(r.app_class);
    if (it == psi.end())
      throw std::invalid_argument("no deadline entry for app class: " + r.app_class);
    if (r.response > it->second) ++violated;
  }
  return static_cast<double>(violated) / static_cast<double>(records.size());
}

double percentile_nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty sample");
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("percentile p must be in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(values.size())));
  return values[rank - 1];
}

Aggregates aggregate(const std::vector<QoSRecord>& rows, double alpha, double beta) {
  Aggregates a;
  a.intervals = static_cast<int>(rows.size());
  double sum_response = 0.0, sum_response_sq = 0.0, sum_migration = 0.0, sum_wait = 0.0;
  double art_weighted = 0.0;
  for (const auto& r : rows) {
    a.mean_aec += r.aec;
    a.mean_objective += alpha * r.aec + beta * r.art;
    art_weighted += r.art * r.n_completed;
    a.total_energy_kwh += r.energy_kwh;
    a.total_cost += r.cost;
    a.n_completed += r.n_completed;
    a.n_started += r.n_started;
    a.n_migrations += r.n_migrations;
    a.total_slo_violations += r.n_slo_violations;
    sum_response += r.sum_response;
    sum_response_sq += r.sum_response_sq;
    sum_migration += r.sum_migration_time;
    sum_wait += r.sum_wait_intervals;
  }
  if (a.intervals > 0) {
    a.mean_aec /= a.intervals;
    a.mean_objective /= a.intervals;
  }
  if (a.n_completed > 0) {
    a.mean_art = art_weighted / a.n_completed;
    a.mean_response = sum_response / a.n_completed;
    a.slo_violation_fraction =
        static_cast<double>(a.total_slo_violations) / static_cast<double>(a.n_completed);
    a.fairness = sum_response_sq == 0.0
                     ? 1.0
                     : sum_response * sum_response / (a.n_completed * sum_response_sq);
  }
  if (a.n_migrations > 0) a.mean_migration_time = sum_migration / a.n_migrations;
  if (a.n_started > 0) a.mean_wait_intervals = sum_wait / a.n_started;
  return a;
}

}  // namespace fogsim::harness

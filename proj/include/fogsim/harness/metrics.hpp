#pragma once

#include <map>
#include <string>
#include <vector>

#include "fogsim/state.hpp"

namespace fogsim::harness {

/// Completion record of one task, enough to recompute SLO and fairness
/// statistics offline.
struct TaskRecord {
  int id = 0;
  std::string app_class;
  int created_at = 0;
  int finished_at = 0;
  double response = 0.0;      // seconds
  double sla_deadline = 0.0;  // seconds
  int wait_intervals = 0;
};

std::vector<TaskRecord> task_records(const SimState& state);

/// Jain's index of the given values; 1.0 for empty or all-zero input.
double jain_index(const std::vector<double>& values);
double compute_fairness(const std::vector<TaskRecord>& records);

/// Fraction of records whose response exceeds the deadline for their class.
/// Throws if a record's class has no entry in the table.
double compute_slo_violations(const std::vector<TaskRecord>& records,
                              const std::map<std::string, double>& psi);

/// Nearest-rank percentile (p in (0,1]) of an unsorted sample.
double percentile_nearest_rank(std::vector<double> values, double p);

/// Whole-run aggregates recomputable from the per-interval rows alone.
/// Wall-clock timing is tracked separately by the harness.
struct Aggregates {
  int intervals = 0;
  double mean_aec = 0.0;
  double mean_art = 0.0;        // weighted by completions per interval
  double mean_objective = 0.0;  // unweighted mean of alpha*aec + beta*art
  double total_energy_kwh = 0.0;
  double total_cost = 0.0;
  int n_completed = 0;
  int n_started = 0;
  int n_migrations = 0;
  int total_slo_violations = 0;
  double slo_violation_fraction = 0.0;
  double mean_response = 0.0;  // seconds, over completions
  double fairness = 1.0;       // Jain index over all completions
  double mean_migration_time = 0.0;
  double mean_wait_intervals = 0.0;
};

Aggregates aggregate(const std::vector<QoSRecord>& rows, double alpha, double beta);

}  // namespace fogsim::harness

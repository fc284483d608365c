#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogsim {

using Vec4 = Eigen::Vector4d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kResourceDims = 4;  // ips, ram, disk_bw, net_bw

enum class HostLayer { edge, cloud };

/// One interval's resource demand of a task.
struct UtilizationSample {
  double ips = 0.0;      // instructions per second
  double ram = 0.0;      // MB
  double disk_bw = 0.0;  // MB/s
  double net_bw = 0.0;   // MB/s

  Vec4 vec() const { return Vec4(ips, ram, disk_bw, net_bw); }
  static UtilizationSample from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// A compute node: capacities, power curve and placement metadata.
struct Host {
  int id = 0;
  double ips_capacity = 0.0;
  double ram_capacity = 0.0;  // MB
  double ram_bw = 0.0;        // MB/s
  double disk_bw = 0.0;       // MB/s
  double net_bw = 0.0;        // MB/s
  double latency = 0.0;       // seconds, ping to broker
  std::array<double, 11> power_curve{};  // watts at 0%,10%,...,100% CPU
  double cost_rate = 0.0;     // currency per hour
  HostLayer layer = HostLayer::edge;
  std::string model;

  Vec4 capacity_vec() const { return Vec4(ips_capacity, ram_capacity, disk_bw, net_bw); }

  // Piecewise-linear interpolation over the 11-point curve. Fractions outside
  // [0,1] are clamped; callers that can produce them warn separately.
  double power_at(double cpu_fraction) const;

  double max_power() const { return power_curve[10]; }
  double idle_power() const { return power_curve[0]; }

  void validate() const;
};

/// Immutable description of one task: its demand trace and completion budget.
struct TaskSpec {
  int id = 0;
  int created_at = 0;  // interval index
  std::string app_class;
  double total_instructions = 0.0;
  std::vector<UtilizationSample> trace;  // repeats cyclically once exhausted
  double sla_deadline = 0.0;             // seconds

  const UtilizationSample& sample(int executed_intervals) const {
    return trace[static_cast<std::size_t>(executed_intervals) % trace.size()];
  }

  // Peak demand over the trace, used to admission-check tasks whose current
  // demand is still unknown.
  Vec4 max_demand() const;

  void validate() const;
};

struct Assignment {
  int task_id = 0;
  int host_id = 0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Ordered set of (task, host) pairs covering allocations and migrations.
struct Decision {
  std::vector<Assignment> assignments;

  bool empty() const { return assignments.empty(); }
  std::size_t size() const { return assignments.size(); }
  std::optional<int> host_for(int task_id) const;
  void validate(int host_count) const;
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Lifecycle record of one task inside a simulation.
struct TaskState {
  TaskSpec spec;
  std::optional<int> host;                 // absent iff waiting
  double instructions_done = 0.0;
  int wait_intervals = 0;
  int intervals_executed = 0;              // indexes the cyclic trace
  std::optional<double> migrating_until;   // simulation time, seconds
  std::optional<int> finished_at;          // interval of completion
  UtilizationSample last_observed;         // demand executed in the previous interval
  std::vector<UtilizationSample> util_history;  // granted demand, one per executed interval

  bool finished() const { return finished_at.has_value(); }
};

/// Per-interval QoS row. The count/sum fields exist so that every aggregate
/// can be recomputed from the rows alone.
struct QoSRecord {
  int interval = 0;
  double aec = 0.0;                      // in [0,1]
  double art = 0.0;                      // in [0,1]
  double energy_kwh = 0.0;
  double slo_violation_fraction = 0.0;   // over this interval's completions
  double fairness = 1.0;                 // Jain index over this interval's completions
  double avg_migration_time = 0.0;       // seconds
  double scheduling_time = 0.0;          // seconds, wall clock, filled by the harness
  double avg_wait_intervals = 0.0;       // over tasks that started execution this interval
  double cost = 0.0;                     // currency accrued this interval

  int n_active = 0;
  int n_waiting = 0;
  int n_completed = 0;
  int n_slo_violations = 0;
  int n_migrations = 0;
  int n_started = 0;
  double sum_response = 0.0;
  double sum_response_sq = 0.0;
  double sum_migration_time = 0.0;
  double sum_wait_intervals = 0.0;
};

struct MigrationEvent {
  int task_id = 0;
  int source_host = 0;
  int target_host = 0;
  double duration = 0.0;  // seconds
};

}  // namespace fogsim

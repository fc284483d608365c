#pragma once

#include "fogsim/types.hpp"

#include <cstdint>

namespace fogsim {

/// Value-type simulation state, stepped one scheduling interval at a time.
/// `active` holds the tasks carried into the next interval (completions are
/// moved to `finished` at the end of each step), `waiting` the queue, and
/// `pending_new` arrivals staged for the next step.
struct SimState {
  double delta = 300.0;   // seconds per interval
  std::uint64_t seed = 0;
  int t = 0;              // next interval to execute

  std::vector<Host> hosts;
  std::vector<TaskState> active;
  std::vector<TaskState> waiting;
  std::vector<TaskState> finished;
  std::vector<TaskSpec> pending_new;

  std::vector<Vec4> host_used;     // granted utilization of the last executed interval
  std::vector<std::vector<double>> cpu_fraction_history;  // per host, one entry per interval
  double max_response_seen = 0.0;  // running maximum response time, seconds
  std::vector<QoSRecord> history;

  static SimState make(std::vector<Host> hosts, double delta, std::uint64_t seed);

  const Host& host(int id) const { return hosts.at(static_cast<std::size_t>(id)); }

  TaskState* find_active(int task_id);
  TaskState* find_waiting(int task_id);
  const TaskState* find_active(int task_id) const;
  const TaskState* find_waiting(int task_id) const;
  const TaskSpec* find_pending(int task_id) const;

  /// Task ids the scheduler must decide on this interval: staged arrivals,
  /// the wait queue, and the carried-over active set.
  std::vector<int> scheduler_input_ids() const;

  /// Deterministic tie-break key for a task, stable under set changes.
  std::uint64_t tie_break(int task_id) const;

  /// Demand vector used for admission checks: peak-trace demand for tasks
  /// that have never executed, the upcoming trace sample otherwise.
  Vec4 admission_demand(int task_id) const;

  /// Structural fingerprint over everything except wall-clock timing fields.
  std::uint64_t fingerprint() const;
};

}  // namespace fogsim

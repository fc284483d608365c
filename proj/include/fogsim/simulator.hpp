#pragma once

#include "fogsim/state.hpp"

#include <unordered_map>

namespace fogsim {

/// Seconds a task is unavailable while moving between hosts: zero when the
/// hosts coincide, otherwise a latency term (paid only across the edge/cloud
/// boundary) plus the time to push the task's RAM footprint through the
/// slower of the two network links.
double migration_time(const Host& source, const Host& target, double ram_mb);

/// Joules consumed by all hosts over one interval at the given per-host CPU
/// load fractions, using each host's interpolated power curve.
double interval_energy(const std::vector<Host>& hosts,
                       const std::vector<double>& cpu_fractions,
                       double delta);

/// Queues arrivals for the next step. Call before asking a scheduler to
/// decide so the new tasks are part of its input set. Throws
/// std::invalid_argument on invalid specs or reused task ids.
void stage_arrivals(SimState& state, const std::vector<TaskSpec>& arrivals);

/// Executes one scheduling interval: stages `arrivals`, reduces `requested`
/// to its feasible subset, applies it, runs every active task against its
/// trace with proportional scaling on oversubscribed hosts, retires
/// completions, and appends (and returns) the interval's QoS record.
QoSRecord step(SimState& state, const Decision& requested,
               const std::vector<TaskSpec>& arrivals);

/// Per-task demand overrides for lookahead, keyed by task id.
using DemandMap = std::unordered_map<int, Vec4>;

/// Evaluates one hypothetical interval without mutating `state`: every task
/// that would be active under the decision takes its demand from `predicted`
/// instead of its trace. Throws std::invalid_argument if a predicted demand
/// is missing for such a task.
QoSRecord lookahead(const SimState& state, const Decision& requested,
                    const std::vector<TaskSpec>& arrivals,
                    const DemandMap& predicted);

}  // namespace fogsim

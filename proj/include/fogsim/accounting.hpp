#pragma once

#include "fogsim/state.hpp"

namespace fogsim {

/// Load each host carries into the coming interval: the sum of upcoming
/// admission demands of the tasks currently active on it.
std::vector<Vec4> admission_snapshot(const SimState& state);

/// Reduces a requested decision to its feasible subset. Pairs are admitted in
/// descending order of accumulated wait (ties broken by a seeded hash of the
/// task id), and a pair is kept only if the target host can absorb the task's
/// admission demand on top of what it already carries into the interval.
/// Pairs that keep an active task on its current host are always kept; pairs
/// naming unknown tasks or out-of-range hosts are dropped.
Decision feasible_subset(const SimState& state, const Decision& requested);

/// Applies an already-feasible decision to the queues: admitted arrivals and
/// waiting tasks move to the active set, migrating tasks change host, and
/// arrivals without a feasible placement join the wait queue. Returns the ids
/// of tasks that started executing this interval.
std::vector<int> advance_sets(SimState& state, const Decision& executed);

}  // namespace fogsim

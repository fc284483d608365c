#include "fogsim/accounting.hpp"

#include <algorithm>
#include <cassert>

namespace fogsim {

namespace {

int wait_of(const SimState& state, int task_id) {
  if (state.find_pending(task_id)) return 0;
  if (const TaskState* ts = state.find_waiting(task_id)) return ts->wait_intervals;
  if (const TaskState* ts = state.find_active(task_id)) return ts->wait_intervals;
  return -1;  // unknown id, dropped by the caller
}

bool fits(const Vec4& demand, const Vec4& used, const Vec4& cap) {
  return ((used + demand).array() <= cap.array()).all();
}

}  // namespace

std::vector<Vec4> admission_snapshot(const SimState& state) {
  std::vector<Vec4> used(state.hosts.size(), Vec4::Zero());
  for (const auto& ts : state.active)
    used[static_cast<std::size_t>(*ts.host)] += state.admission_demand(ts.spec.id);
  return used;
}

Decision feasible_subset(const SimState& state, const Decision& requested) {
  struct Entry {
    Assignment pair;
    int wait;
    std::uint64_t tie;
  };
  std::vector<Entry> entries;
  entries.reserve(requested.assignments.size());
  const int n_hosts = static_cast<int>(state.hosts.size());
  std::vector<int> seen;
  for (const auto& pair : requested.assignments) {
    if (pair.host_id < 0 || pair.host_id >= n_hosts) continue;
    if (std::find(seen.begin(), seen.end(), pair.task_id) != seen.end()) continue;
    const int wait = wait_of(state, pair.task_id);
    if (wait < 0) continue;
    seen.push_back(pair.task_id);
    entries.push_back({pair, wait, state.tie_break(pair.task_id)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.wait != b.wait) return a.wait > b.wait;
    return a.tie < b.tie;
  });

  std::vector<Vec4> used = admission_snapshot(state);

  Decision executed;
  for (const auto& e : entries) {
    const TaskState* activ = state.find_active(e.pair.task_id);
    const auto target = static_cast<std::size_t>(e.pair.host_id);
    const Vec4 cap = state.hosts[target].capacity_vec();
    const Vec4 demand = state.admission_demand(e.pair.task_id);
    if (activ && *activ->host == e.pair.host_id) {
      executed.assignments.push_back(e.pair);  // stays put, nothing to admit
      continue;
    }
    if (!fits(demand, used[target], cap)) continue;
    if (activ) used[static_cast<std::size_t>(*activ->host)] -= demand;
    used[target] += demand;
    executed.assignments.push_back(e.pair);
  }
  return executed;
}

std::vector<int> advance_sets(SimState& state, const Decision& executed) {
  std::vector<int> started;
  for (const auto& pair : executed.assignments) {
    if (TaskState* ts = state.find_active(pair.task_id)) {
      ts->host = pair.host_id;
      continue;
    }
    if (TaskState* ts = state.find_waiting(pair.task_id)) {
      ts->host = pair.host_id;
      state.active.push_back(*ts);
      state.waiting.erase(state.waiting.begin() + (ts - state.waiting.data()));
      started.push_back(pair.task_id);
      continue;
    }
    if (const TaskSpec* spec = state.find_pending(pair.task_id)) {
      TaskState ts;
      ts.spec = *spec;
      ts.host = pair.host_id;
      state.active.push_back(ts);
      started.push_back(pair.task_id);
    }
  }
  // Arrivals left without a placement join the wait queue.
  for (const auto& spec : state.pending_new) {
    bool placed = false;
    for (const auto& pair : executed.assignments)
      if (pair.task_id == spec.id) { placed = true; break; }
    if (!placed) {
      TaskState ts;
      ts.spec = spec;
      state.waiting.push_back(ts);
    }
  }
  state.pending_new.clear();

  for (const auto& w : state.waiting) assert(!state.find_active(w.spec.id));
  return started;
}

}  // namespace fogsim

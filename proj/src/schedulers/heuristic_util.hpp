#pragma once

#include "fogsim/accounting.hpp"
#include "fogsim/state.hpp"

#include <algorithm>
#include <optional>

namespace fogsim::detail {

inline bool fits(const Vec4& demand, const Vec4& used, const Vec4& cap) {
  return ((used + demand).array() <= cap.array()).all();
}

// Least-CPU-utilized host with room for `demand`, optionally excluding one.
inline std::optional<int> least_utilized_feasible(const SimState& state,
                                                  const std::vector<Vec4>& used,
                                                  const Vec4& demand,
                                                  int exclude = -1) {
  std::optional<int> best;
  double best_frac = 0.0;
  for (std::size_t h = 0; h < state.hosts.size(); ++h) {
    if (static_cast<int>(h) == exclude) continue;
    if (!fits(demand, used[h], state.hosts[h].capacity_vec())) continue;
    const double frac = used[h][0] / state.hosts[h].ips_capacity;
    if (!best || frac < best_frac) {
      best = static_cast<int>(h);
      best_frac = frac;
    }
  }
  return best;
}

// Fresh tasks ordered the way feasible_subset will admit them.
inline std::vector<int> placement_order(const SimState& state) {
  struct Key {
    int id;
    int wait;
    std::uint64_t tie;
  };
  std::vector<Key> keys;
  for (const auto& spec : state.pending_new) keys.push_back({spec.id, 0, state.tie_break(spec.id)});
  for (const auto& ts : state.waiting)
    keys.push_back({ts.spec.id, ts.wait_intervals, state.tie_break(ts.spec.id)});
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.wait != b.wait) return a.wait > b.wait;
    return a.tie < b.tie;
  });
  std::vector<int> ids;
  for (const auto& k : keys) ids.push_back(k.id);
  return ids;
}

}  // namespace fogsim::detail

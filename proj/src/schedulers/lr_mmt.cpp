#include "fogsim/schedulers/lr_mmt.hpp"

#include "heuristic_util.hpp"

namespace fogsim {

double extrapolate_next(const std::vector<double>& history, int window) {
  const auto n = static_cast<int>(history.size());
  const int k = std::min(window, n);
  if (k == 0) return 0.0;
  if (k == 1) return history.back();
  // Least squares over x = 0..k-1 on the last k points, evaluated at x = k.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < k; ++i) {
    const double xv = i;
    const double yv = history[static_cast<std::size_t>(n - k + i)];
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
  }
  const double denom = k * sxx - sx * sx;
  const double slope = denom != 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
  const double intercept = (sy - slope * sx) / k;
  return intercept + slope * k;
}

Decision LrMmtScheduler::schedule(const SimState& state) {
  std::vector<Vec4> used = admission_snapshot(state);
  Decision d;
  std::vector<int> migrated;

  for (std::size_t h = 0; h < state.hosts.size(); ++h) {
    const auto& hist = state.cpu_fraction_history[h];
    if (static_cast<int>(hist.size()) < opts_.window) continue;  // not enough evidence
    if (extrapolate_next(hist, opts_.window) <= opts_.threshold) continue;

    // Minimum-migration-time victim: smallest RAM footprint wins.
    const TaskState* victim = nullptr;
    for (const auto& ts : state.active) {
      if (*ts.host != static_cast<int>(h)) continue;
      if (!victim || ts.last_observed.ram < victim->last_observed.ram ||
          (ts.last_observed.ram == victim->last_observed.ram && ts.spec.id < victim->spec.id))
        victim = &ts;
    }
    if (!victim) continue;
    const Vec4 demand = state.admission_demand(victim->spec.id);
    used[h] -= demand;
    const auto target =
        detail::least_utilized_feasible(state, used, demand, static_cast<int>(h));
    if (target) {
      used[static_cast<std::size_t>(*target)] += demand;
      d.assignments.push_back({victim->spec.id, *target});
      migrated.push_back(victim->spec.id);
    } else {
      used[h] += demand;  // nowhere to go, keep it
    }
  }

  for (int id : detail::placement_order(state)) {
    const Vec4 demand = state.admission_demand(id);
    if (const auto target = detail::least_utilized_feasible(state, used, demand)) {
      used[static_cast<std::size_t>(*target)] += demand;
      d.assignments.push_back({id, *target});
    }
  }
  for (const auto& ts : state.active)
    if (std::find(migrated.begin(), migrated.end(), ts.spec.id) == migrated.end())
      d.assignments.push_back({ts.spec.id, *ts.host});
  return d;
}

}  // namespace fogsim

#include "fogsim/schedulers/mad_mc.hpp"

#include "heuristic_util.hpp"

#include <cmath>

namespace fogsim {

namespace {

double median(std::vector<double> v) {
  const auto n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double median_absolute_deviation(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const double med = median(values);
  for (auto& v : values) v = std::abs(v - med);
  return median(std::move(values));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = std::min(a.size(), b.size());
  if (n < 2) return 0.0;
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

Decision MadMcScheduler::schedule(const SimState& state) {
  std::vector<Vec4> used = admission_snapshot(state);
  Decision d;
  std::vector<int> migrated;

  for (std::size_t h = 0; h < state.hosts.size(); ++h) {
    const auto& hist = state.cpu_fraction_history[h];
    if (static_cast<int>(hist.size()) < opts_.window) continue;
    const std::vector<double> recent(hist.end() - opts_.window, hist.end());
    const double threshold = 1.0 - opts_.safety * median_absolute_deviation(recent);
    const double current = state.host_used[h][0] / state.hosts[h].ips_capacity;
    if (current <= threshold) continue;

    // Candidate CPU series on this host, aligned to a common window.
    std::vector<const TaskState*> tasks;
    for (const auto& ts : state.active)
      if (*ts.host == static_cast<int>(h)) tasks.push_back(&ts);
    if (tasks.empty()) continue;
    std::size_t window = static_cast<std::size_t>(opts_.window);
    for (const auto* ts : tasks) window = std::min(window, ts->util_history.size());

    auto tail_ips = [&](const TaskState* ts) {
      std::vector<double> s;
      const auto& u = ts->util_history;
      for (std::size_t i = u.size() - window; i < u.size(); ++i) s.push_back(u[i].ips);
      return s;
    };
    const TaskState* victim = nullptr;
    double best_corr = 0.0;
    for (const auto* ts : tasks) {
      const std::vector<double> own = tail_ips(ts);
      std::vector<double> others(window, 0.0);
      for (const auto* other : tasks) {
        if (other == ts) continue;
        const std::vector<double> s = tail_ips(other);
        for (std::size_t i = 0; i < window; ++i) others[i] += s[i];
      }
      const double corr = pearson(own, others);
      if (!victim || corr > best_corr ||
          (corr == best_corr && ts->spec.id < victim->spec.id))
        victim = ts, best_corr = corr;
    }

    const Vec4 demand = state.admission_demand(victim->spec.id);
    used[h] -= demand;
    const auto target =
        detail::least_utilized_feasible(state, used, demand, static_cast<int>(h));
    if (target) {
      used[static_cast<std::size_t>(*target)] += demand;
      d.assignments.push_back({victim->spec.id, *target});
      migrated.push_back(victim->spec.id);
    } else {
      used[h] += demand;
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

#include "fogsim/schedulers/random.hpp"

namespace fogsim {

Decision RandomScheduler::schedule(const SimState& state) {
  Decision d;
  const auto n_hosts = static_cast<std::uint64_t>(state.hosts.size());
  for (const auto& spec : state.pending_new)
    d.assignments.push_back({spec.id, static_cast<int>(rng_.bounded(n_hosts))});
  for (const auto& ts : state.waiting)
    d.assignments.push_back({ts.spec.id, static_cast<int>(rng_.bounded(n_hosts))});
  for (const auto& ts : state.active) {
    const bool move = rng_.uniform() < 0.5;
    const int host = move ? static_cast<int>(rng_.bounded(n_hosts)) : *ts.host;
    d.assignments.push_back({ts.spec.id, host});
  }
  return d;
}

}  // namespace fogsim

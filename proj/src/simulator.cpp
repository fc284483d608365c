#include "fogsim/simulator.hpp"

#include "fogsim/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fogsim {

double migration_time(const Host& source, const Host& target, double ram_mb) {
  if (source.id == target.id) return 0.0;
  const double latency =
      source.layer == target.layer ? 0.0 : source.latency + target.latency;
  const double bw = std::min(source.net_bw, target.net_bw);
  return latency + ram_mb / bw;
}

double interval_energy(const std::vector<Host>& hosts,
                       const std::vector<double>& cpu_fractions,
                       double delta) {
  if (hosts.size() != cpu_fractions.size())
    throw std::invalid_argument("interval_energy: fraction per host required");
  double joules = 0.0;
  for (std::size_t i = 0; i < hosts.size(); ++i)
    joules += hosts[i].power_at(cpu_fractions[i]) * delta;
  return joules;
}

void stage_arrivals(SimState& state, const std::vector<TaskSpec>& arrivals) {
  for (const auto& spec : arrivals) {
    spec.validate();
    const bool taken = state.find_active(spec.id) || state.find_waiting(spec.id) ||
                       state.find_pending(spec.id) ||
                       std::any_of(state.finished.begin(), state.finished.end(),
                                   [&](const TaskState& ts) { return ts.spec.id == spec.id; });
    if (taken) throw std::invalid_argument("stage_arrivals: duplicate task id");
    state.pending_new.push_back(spec);
  }
}

namespace {

double jain_index(double sum, double sum_sq, int n) {
  if (n == 0 || sum_sq == 0.0) return 1.0;
  return sum * sum / (n * sum_sq);
}

QoSRecord execute(SimState& state, const Decision& requested,
                  const std::vector<TaskSpec>& arrivals,
                  const DemandMap* predicted) {
  stage_arrivals(state, arrivals);
  const Decision executed = feasible_subset(state, requested);

  // Migrations are the admitted pairs that move an already-running task.
  const double interval_start = state.t * state.delta;
  std::vector<MigrationEvent> migrations;
  for (const auto& pair : executed.assignments) {
    const TaskState* ts = state.find_active(pair.task_id);
    if (!ts || *ts->host == pair.host_id) continue;
    MigrationEvent ev;
    ev.task_id = pair.task_id;
    ev.source_host = *ts->host;
    ev.target_host = pair.host_id;
    ev.duration = migration_time(state.host(ev.source_host), state.host(ev.target_host),
                                 ts->last_observed.ram);
    migrations.push_back(ev);
  }

  const std::vector<int> started = advance_sets(state, executed);
  for (const auto& ev : migrations)
    state.find_active(ev.task_id)->migrating_until = interval_start + ev.duration;

  // Demand of every active task for this interval, then fair-share scaling
  // per host and resource dimension when the sums exceed capacity.
  std::vector<Vec4> demand(state.active.size());
  std::vector<Vec4> host_sum(state.hosts.size(), Vec4::Zero());
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    TaskState& ts = state.active[i];
    if (predicted) {
      const auto it = predicted->find(ts.spec.id);
      if (it == predicted->end())
        throw std::invalid_argument("lookahead: no predicted demand for task " +
                                    std::to_string(ts.spec.id));
      demand[i] = it->second;
    } else {
      demand[i] = ts.spec.sample(ts.intervals_executed).vec();
    }
    host_sum[static_cast<std::size_t>(*ts.host)] += demand[i];
  }
  std::vector<Vec4> scale(state.hosts.size(), Vec4::Ones());
  for (std::size_t h = 0; h < state.hosts.size(); ++h) {
    const Vec4 cap = state.hosts[h].capacity_vec();
    for (int d = 0; d < kResourceDims; ++d)
      if (host_sum[h][d] > cap[d]) scale[h][d] = cap[d] / host_sum[h][d];
  }

  QoSRecord rec;
  rec.interval = state.t;
  rec.n_active = static_cast<int>(state.active.size());
  rec.n_waiting = static_cast<int>(state.waiting.size());
  rec.n_migrations = static_cast<int>(migrations.size());
  rec.n_started = static_cast<int>(started.size());
  for (const auto& ev : migrations) rec.sum_migration_time += ev.duration;
  rec.avg_migration_time =
      migrations.empty() ? 0.0 : rec.sum_migration_time / rec.n_migrations;
  for (int id : started) {
    const TaskState* ts = state.find_active(id);
    rec.sum_wait_intervals += ts->wait_intervals;
  }
  rec.avg_wait_intervals = started.empty() ? 0.0 : rec.sum_wait_intervals / rec.n_started;

  // Run the interval.
  const double interval_end = interval_start + state.delta;
  for (auto& used : state.host_used) used = Vec4::Zero();
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    TaskState& ts = state.active[i];
    const auto h = static_cast<std::size_t>(*ts.host);
    const Vec4 granted = demand[i].cwiseProduct(scale[h]);
    state.host_used[h] += granted;
    double avail = 1.0;
    if (ts.migrating_until) {
      const double busy = std::clamp(*ts.migrating_until - interval_start, 0.0, state.delta);
      avail = 1.0 - busy / state.delta;
      if (*ts.migrating_until <= interval_end) ts.migrating_until.reset();
    }
    ts.instructions_done = std::min(ts.spec.total_instructions,
                                    ts.instructions_done + granted[0] * state.delta * avail);
    ts.last_observed = UtilizationSample::from_vec(granted);
    ts.util_history.push_back(ts.last_observed);
    ts.intervals_executed += 1;
    if (ts.instructions_done >= ts.spec.total_instructions) ts.finished_at = state.t;
  }
  for (auto& ts : state.waiting) ts.wait_intervals += 1;

  // Interval energy and cost over all hosts.
  std::vector<double> fracs(state.hosts.size());
  double max_power_sum = 0.0;
  for (std::size_t h = 0; h < state.hosts.size(); ++h) {
    fracs[h] = state.host_used[h][0] / state.hosts[h].ips_capacity;
    state.cpu_fraction_history[h].push_back(fracs[h]);
    max_power_sum += state.hosts[h].max_power();
    rec.cost += state.hosts[h].cost_rate * state.delta / 3600.0;
  }
  const double joules = interval_energy(state.hosts, fracs, state.delta);
  rec.energy_kwh = joules / 3.6e6;
  const double aec_den =
      (rec.n_active > 0 ? rec.n_active : 1) * max_power_sum * state.delta;
  rec.aec = joules / aec_den;

  // Retire completions and account response-time metrics.
  std::vector<TaskState> done;
  for (const auto& ts : state.active)
    if (ts.finished()) done.push_back(ts);
  state.active.erase(std::remove_if(state.active.begin(), state.active.end(),
                                    [](const TaskState& ts) { return ts.finished(); }),
                     state.active.end());
  rec.n_completed = static_cast<int>(done.size());
  for (const auto& ts : done) {
    const double response = (state.t - ts.spec.created_at + 1) * state.delta;
    state.max_response_seen = std::max(state.max_response_seen, response);
    rec.sum_response += response;
    rec.sum_response_sq += response * response;
    if (response > ts.spec.sla_deadline) rec.n_slo_violations += 1;
    state.finished.push_back(ts);
  }
  if (rec.n_completed > 0) {
    rec.art = rec.sum_response / (rec.n_completed * state.max_response_seen);
    rec.slo_violation_fraction =
        static_cast<double>(rec.n_slo_violations) / rec.n_completed;
  }
  rec.fairness = jain_index(rec.sum_response, rec.sum_response_sq, rec.n_completed);

  state.history.push_back(rec);
  state.t += 1;
  return rec;
}

}  // namespace

QoSRecord step(SimState& state, const Decision& requested,
               const std::vector<TaskSpec>& arrivals) {
  return execute(state, requested, arrivals, nullptr);
}

QoSRecord lookahead(const SimState& state, const Decision& requested,
                    const std::vector<TaskSpec>& arrivals,
                    const DemandMap& predicted) {
  SimState scratch = state;
  return execute(scratch, requested, arrivals, &predicted);
}

}  // namespace fogsim

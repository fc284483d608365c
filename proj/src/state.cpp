#include "fogsim/state.hpp"

#include "fogsim/rng.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace fogsim {

SimState SimState::make(std::vector<Host> hosts, double delta, std::uint64_t seed) {
  SimState s;
  s.delta = delta;
  s.seed = seed;
  s.hosts = std::move(hosts);
  for (const auto& h : s.hosts) h.validate();
  s.host_used.assign(s.hosts.size(), Vec4::Zero());
  s.cpu_fraction_history.resize(s.hosts.size());
  return s;
}

namespace {

template <typename Vec>
auto* find_by_id(Vec& tasks, int task_id) {
  for (auto& ts : tasks)
    if (ts.spec.id == task_id) return &ts;
  return static_cast<decltype(&tasks[0])>(nullptr);
}

}  // namespace

TaskState* SimState::find_active(int task_id) { return find_by_id(active, task_id); }
TaskState* SimState::find_waiting(int task_id) { return find_by_id(waiting, task_id); }
const TaskState* SimState::find_active(int task_id) const { return find_by_id(active, task_id); }
const TaskState* SimState::find_waiting(int task_id) const { return find_by_id(waiting, task_id); }

const TaskSpec* SimState::find_pending(int task_id) const {
  for (const auto& spec : pending_new)
    if (spec.id == task_id) return &spec;
  return nullptr;
}

std::vector<int> SimState::scheduler_input_ids() const {
  std::vector<int> ids;
  ids.reserve(pending_new.size() + waiting.size() + active.size());
  for (const auto& spec : pending_new) ids.push_back(spec.id);
  for (const auto& ts : waiting) ids.push_back(ts.spec.id);
  for (const auto& ts : active) ids.push_back(ts.spec.id);
  return ids;
}

std::uint64_t SimState::tie_break(int task_id) const {
  return splitmix64(seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(task_id)));
}

Vec4 SimState::admission_demand(int task_id) const {
  if (const TaskSpec* spec = find_pending(task_id)) return spec->max_demand();
  const TaskState* ts = find_waiting(task_id);
  if (!ts) ts = find_active(task_id);
  if (!ts) throw std::invalid_argument("admission_demand: unknown task id");
  if (ts->intervals_executed == 0) return ts->spec.max_demand();
  return ts->spec.sample(ts->intervals_executed).vec();
}

namespace {

void mix(std::uint64_t& h, std::uint64_t v) { h = splitmix64(h ^ v); }

std::uint64_t bits(double x) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(x));
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

void mix_task(std::uint64_t& h, const TaskState& ts) {
  mix(h, static_cast<std::uint64_t>(ts.spec.id));
  mix(h, static_cast<std::uint64_t>(ts.host ? *ts.host : -1));
  mix(h, bits(ts.instructions_done));
  mix(h, static_cast<std::uint64_t>(ts.wait_intervals));
  mix(h, static_cast<std::uint64_t>(ts.intervals_executed));
  mix(h, static_cast<std::uint64_t>(ts.finished_at ? *ts.finished_at : -1));
}

}  // namespace

std::uint64_t SimState::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  mix(h, static_cast<std::uint64_t>(t));
  mix(h, seed);
  mix(h, bits(delta));
  mix(h, bits(max_response_seen));
  for (const auto& used : host_used)
    for (int i = 0; i < kResourceDims; ++i) mix(h, bits(used[i]));
  for (const auto* set : {&active, &waiting, &finished}) {
    mix(h, set->size());
    for (const auto& ts : *set) mix_task(h, ts);
  }
  mix(h, pending_new.size());
  for (const auto& spec : pending_new) mix(h, static_cast<std::uint64_t>(spec.id));
  mix(h, history.size());
  for (const auto& q : history) {
    mix(h, bits(q.aec));
    mix(h, bits(q.art));
    mix(h, bits(q.energy_kwh));
    mix(h, static_cast<std::uint64_t>(q.n_completed));
  }
  return h;
}

}  // namespace fogsim

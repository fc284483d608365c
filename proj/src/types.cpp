#include "fogsim/types.hpp"

#include <algorithm>
#include <cmath>

namespace fogsim {

double Host::power_at(double cpu_fraction) const {
  const double f = std::clamp(cpu_fraction, 0.0, 1.0);
  const double pos = f * 10.0;
  const int lo = std::min(static_cast<int>(pos), 9);
  const double w = pos - lo;
  return power_curve[lo] * (1.0 - w) + power_curve[lo + 1] * w;
}

void Host::validate() const {
  if (ips_capacity <= 0 || ram_capacity <= 0 || ram_bw <= 0 || disk_bw <= 0 || net_bw <= 0)
    throw std::invalid_argument("host " + std::to_string(id) + ": capacities must be positive");
  if (latency < 0) throw std::invalid_argument("host " + std::to_string(id) + ": negative latency");
  for (std::size_t i = 1; i < power_curve.size(); ++i)
    if (power_curve[i] < power_curve[i - 1])
      throw std::invalid_argument("host " + std::to_string(id) + ": power curve must be non-decreasing");
}

Vec4 TaskSpec::max_demand() const {
  Vec4 m = Vec4::Zero();
  for (const auto& s : trace) m = m.cwiseMax(s.vec());
  return m;
}

void TaskSpec::validate() const {
  if (total_instructions <= 0)
    throw std::invalid_argument("task " + std::to_string(id) + ": total_instructions must be positive");
  if (trace.empty()) throw std::invalid_argument("task " + std::to_string(id) + ": empty trace");
  if (sla_deadline <= 0)
    throw std::invalid_argument("task " + std::to_string(id) + ": sla_deadline must be positive");
  for (const auto& s : trace)
    if (s.ips < 0 || s.ram < 0 || s.disk_bw < 0 || s.net_bw < 0)
      throw std::invalid_argument("task " + std::to_string(id) + ": negative utilization sample");
}

std::optional<int> Decision::host_for(int task_id) const {
  for (const auto& a : assignments)
    if (a.task_id == task_id) return a.host_id;
  return std::nullopt;
}

void Decision::validate(int host_count) const {
  std::vector<int> seen;
  seen.reserve(assignments.size());
  for (const auto& a : assignments) {
    if (a.host_id < 0 || a.host_id >= host_count)
      throw std::invalid_argument("decision references invalid host " + std::to_string(a.host_id));
    if (std::find(seen.begin(), seen.end(), a.task_id) != seen.end())
      throw std::invalid_argument("decision assigns task " + std::to_string(a.task_id) + " twice");
    seen.push_back(a.task_id);
  }
}

}  // namespace fogsim

#include "fogsim/encoding.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace fogsim {

Vector Normalizer::apply(const Vector& raw) const {
  if (empty()) return raw;
  if (raw.size() != lo.size())
    throw std::invalid_argument("normalizer fitted for a different input size");
  Vector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double width = hi[i] - lo[i];
    out[i] = width > 0.0 ? (raw[i] - lo[i]) / width : 0.0;
  }
  return out;
}

Normalizer Normalizer::fit(const std::vector<Vector>& rows, int identity_from) {
  if (rows.empty()) throw std::invalid_argument("cannot fit normalizer on empty data");
  const Eigen::Index dim = rows.front().size();
  Normalizer n;
  n.lo = rows.front();
  n.hi = rows.front();
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("ragged dataset rows");
    n.lo = n.lo.cwiseMin(r);
    n.hi = n.hi.cwiseMax(r);
  }
  for (Eigen::Index i = std::max<Eigen::Index>(identity_from, 0); i < dim; ++i) {
    n.lo[i] = 0.0;
    n.hi[i] = 1.0;
  }
  return n;
}

int encoding_dim(int n_hosts, int extra_slots) {
  const int m = n_hosts * n_hosts;
  return m * kResourceDims + n_hosts * kHostFeatureDims + extra_slots + m * n_hosts;
}

std::vector<int> creation_ordered_ids(const SimState& state) {
  struct Key {
    int id;
    int created;
    std::uint64_t tie;
  };
  std::vector<Key> keys;
  for (int id : state.scheduler_input_ids()) {
    int created = 0;
    if (const TaskSpec* spec = state.find_pending(id)) {
      created = spec->created_at;
    } else if (const TaskState* ts = state.find_waiting(id)) {
      created = ts->spec.created_at;
    } else {
      created = state.find_active(id)->spec.created_at;
    }
    keys.push_back({id, created, state.tie_break(id)});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.created != b.created) return a.created < b.created;
    return a.tie < b.tie;
  });
  const auto cap = static_cast<std::size_t>(state.hosts.size() * state.hosts.size());
  if (keys.size() > cap) {
    std::fprintf(stderr,
                 "warning: %zu tasks exceed the %zu encoder rows; overflow stays queued\n",
                 keys.size(), cap);
    keys.resize(cap);
  }
  std::vector<int> ids;
  ids.reserve(keys.size());
  for (const auto& k : keys) ids.push_back(k.id);
  return ids;
}

void FeatureEncoding::clear_decision_block() {
  x.segment(decision_offset(), task_rows() * n_hosts).setZero();
}

void FeatureEncoding::set_assignment(int row, int host) {
  if (row < 0 || row >= static_cast<int>(row_task_ids.size()))
    throw std::out_of_range("set_assignment: row outside the occupied range");
  if (host < 0 || host >= n_hosts) throw std::out_of_range("set_assignment: bad host");
  x.segment(decision_offset() + row * n_hosts, n_hosts).setZero();
  x[decision_offset() + row * n_hosts + host] = 1.0;
}

void FeatureEncoding::set_decision(const Decision& d) {
  clear_decision_block();
  for (std::size_t r = 0; r < row_task_ids.size(); ++r)
    if (const auto h = d.host_for(row_task_ids[r]))
      set_assignment(static_cast<int>(r), *h);
}

void FeatureEncoding::set_extra(int slot, double value) {
  if (slot < 0 || slot >= extra_slots) throw std::out_of_range("set_extra: bad slot");
  x[extra_offset() + slot] = value;
}

Decision FeatureEncoding::decode(const Vector& xopt) const {
  if (xopt.size() != x.size())
    throw std::invalid_argument("decode: input size mismatch");
  Decision d;
  for (std::size_t r = 0; r < row_task_ids.size(); ++r) {
    const auto seg = xopt.segment(decision_offset() + static_cast<int>(r) * n_hosts, n_hosts);
    int best = 0;
    for (int h = 1; h < n_hosts; ++h)
      if (seg[h] > seg[best]) best = h;
    d.assignments.push_back({row_task_ids[r], best});
  }
  return d;
}

std::vector<bool> FeatureEncoding::decision_mask() const {
  std::vector<bool> mask(static_cast<std::size_t>(dim()), false);
  for (std::size_t r = 0; r < row_task_ids.size(); ++r)
    for (int h = 0; h < n_hosts; ++h)
      mask[static_cast<std::size_t>(decision_offset() + static_cast<int>(r) * n_hosts + h)] =
          true;
  return mask;
}

Vector FeatureEncoding::decision_block(const Vector& xin) const {
  return xin.segment(decision_offset(), task_rows() * n_hosts);
}

FeatureEncoding encode(const SimState& state, const Decision& decision,
                       const Normalizer* norm, int extra_slots) {
  FeatureEncoding enc;
  enc.n_hosts = static_cast<int>(state.hosts.size());
  enc.extra_slots = extra_slots;
  enc.row_task_ids = creation_ordered_ids(state);
  enc.x = Vector::Zero(enc.dim());

  for (std::size_t r = 0; r < enc.row_task_ids.size(); ++r) {
    const TaskState* ts = state.find_active(enc.row_task_ids[r]);
    if (!ts || ts->intervals_executed == 0) continue;  // no observation yet
    enc.x.segment(static_cast<int>(r) * kResourceDims, kResourceDims) =
        ts->last_observed.vec();
  }
  for (int h = 0; h < enc.n_hosts; ++h) {
    const int base = enc.host_offset() + h * kHostFeatureDims;
    enc.x.segment(base, kResourceDims) = state.host_used[static_cast<std::size_t>(h)];
    enc.x.segment(base + kResourceDims, kResourceDims) = state.hosts[static_cast<std::size_t>(h)].capacity_vec();
    enc.x[base + 2 * kResourceDims] = state.hosts[static_cast<std::size_t>(h)].latency;
  }
  if (norm && !norm->empty()) enc.x = norm->apply(enc.x);
  enc.set_decision(decision);
  return enc;
}

}  // namespace fogsim

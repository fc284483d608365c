#pragma once

#include "fogsim/state.hpp"

namespace fogsim {

inline constexpr int kHostFeatureDims = 9;  // utilization 4 + capacity 4 + latency

/// Per-coordinate min-max scaling fitted on a dataset. Decision-block and
/// extra-slot coordinates are kept as identity so one-hot writes after
/// encoding stay consistent with training.
struct Normalizer {
  Vector lo, hi;

  bool empty() const { return lo.size() == 0; }
  Vector apply(const Vector& raw) const;
  static Normalizer fit(const std::vector<Vector>& rows, int identity_from);
};

/// Flattened scorer input: a block of task-utilization rows (capped at
/// |H|^2, zero-padded, ordered by creation interval), a block of host rows,
/// optional extra scalar slots, and a block of one-hot decision rows.
struct FeatureEncoding {
  int n_hosts = 0;
  int extra_slots = 0;
  std::vector<int> row_task_ids;  // occupied decision rows, in row order
  Vector x;

  int task_rows() const { return n_hosts * n_hosts; }
  int host_offset() const { return task_rows() * kResourceDims; }
  int extra_offset() const { return host_offset() + n_hosts * kHostFeatureDims; }
  int decision_offset() const { return extra_offset() + extra_slots; }
  int dim() const { return decision_offset() + task_rows() * n_hosts; }

  void clear_decision_block();
  void set_assignment(int row, int host);
  void set_decision(const Decision& d);  // one-hot rows for tasks present in d
  void set_extra(int slot, double value);

  Decision decode(const Vector& xopt) const;       // per-row argmax over hosts
  std::vector<bool> decision_mask() const;         // free coords for minimize
  Vector decision_block(const Vector& xin) const;  // the M*|H| slice
};

int encoding_dim(int n_hosts, int extra_slots);

/// Scheduler input set, ordered by increasing creation interval with seeded
/// tie-breaks, truncated to the encoder's row capacity (overflow warns once).
std::vector<int> creation_ordered_ids(const SimState& state);

FeatureEncoding encode(const SimState& state, const Decision& decision,
                       const Normalizer* norm = nullptr, int extra_slots = 0);

}  // namespace fogsim

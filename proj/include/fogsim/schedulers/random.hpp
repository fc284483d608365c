#pragma once

#include "fogsim/rng.hpp"
#include "fogsim/schedulers/scheduler.hpp"

namespace fogsim {

/// Uniform placement: every task needing a host gets one uniformly at
/// random, and a uniform subset of the running tasks is re-assigned to
/// uniformly random hosts (the rest keep their current host).
class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed) : rng_(seed) {}
  const char* name() const override { return "random"; }
  Decision schedule(const SimState& state) override;

 private:
  Rng rng_;
};

}  // namespace fogsim

#pragma once

#include "fogsim/state.hpp"

namespace fogsim {

/// Common scheduler surface: decide placements for the staged arrivals, the
/// wait queue and the active set, then learn from the executed interval via
/// observe(). One scheduler instance per simulation.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual const char* name() const = 0;
  virtual Decision schedule(const SimState& state) = 0;
  virtual void observe(const SimState& state, const QoSRecord& rec) {
    (void)state;
    (void)rec;
  }
};

}  // namespace fogsim

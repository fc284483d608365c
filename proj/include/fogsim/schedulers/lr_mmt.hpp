#pragma once

#include "fogsim/schedulers/scheduler.hpp"

namespace fogsim {

/// Overload detection by local regression on each host's recent CPU
/// fractions; from each overloaded host the cheapest-to-move task (smallest
/// RAM footprint, hence minimum migration time) is evicted. Evicted and
/// fresh tasks go to the least-CPU-utilized host that can fit them.
class LrMmtScheduler : public Scheduler {
 public:
  struct Options {
    int window = 10;          // regression history length
    double threshold = 0.8;   // predicted CPU fraction that counts as overload
  };

  LrMmtScheduler() = default;
  explicit LrMmtScheduler(Options opts) : opts_(opts) {}
  const char* name() const override { return "lr_mmt"; }
  Decision schedule(const SimState& state) override;

 private:
  Options opts_{};
};

/// Least-squares line through the last `window` points, evaluated one step
/// past the end. Exposed for direct verification.
double extrapolate_next(const std::vector<double>& history, int window);

}  // namespace fogsim

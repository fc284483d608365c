#pragma once

#include "fogsim/schedulers/scheduler.hpp"

namespace fogsim {

/// Overload detection by median absolute deviation of each host's recent
/// CPU fractions (threshold 1 - s*MAD); the evicted task is the one whose
/// CPU series correlates most with the rest of the host's load. Placement
/// matches LR-MMT: least-utilized feasible host.
class MadMcScheduler : public Scheduler {
 public:
  struct Options {
    int window = 10;
    double safety = 2.5;  // s in threshold = 1 - s*MAD
  };

  MadMcScheduler() = default;
  explicit MadMcScheduler(Options opts) : opts_(opts) {}
  const char* name() const override { return "mad_mc"; }
  Decision schedule(const SimState& state) override;

 private:
  Options opts_{};
};

double median_absolute_deviation(std::vector<double> values);

/// Pearson correlation; either series constant -> 0 by convention.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fogsim

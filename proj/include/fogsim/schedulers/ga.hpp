#pragma once

#include "fogsim/rng.hpp"
#include "fogsim/schedulers/gobi.hpp"
#include "fogsim/schedulers/scheduler.hpp"

namespace fogsim {

struct GaConfig {
  int population = 50;
  int generations = 100;
  double mutation_rate = 0.05;   // per decision row
  double crossover_rate = 0.9;
  int elitism = 2;

  void validate() const;
};

/// Evolves whole decision vectors against the frozen scorer used by the
/// gradient scheduler; tournament selection, single-point row crossover,
/// per-row mutation to a uniformly random host.
class GaScheduler : public Scheduler {
 public:
  GaScheduler(GobiModel model, GaConfig cfg, std::uint64_t seed);

  const char* name() const override { return "ga"; }
  Decision schedule(const SimState& state) override;

 private:
  GobiModel model_;
  GaConfig cfg_;
  Rng rng_;
};

}  // namespace fogsim

#pragma once

#include "fogsim/nn/lstm.hpp"
#include "fogsim/schedulers/gobi.hpp"
#include "fogsim/simulator.hpp"

#include <map>
#include <string>

namespace fogsim {

/// Composite training loss for the extended scorer: prediction error plus,
/// when the plain scheduler's simulated outcome beat the realized one, the
/// mean squared distance between the two decision matrices (normalized by
/// the full decision-block size, padding included).
double star_loss(double pred, double observed, double gobi_obj, double star_obj,
                 const Vector& dbar_block, const Vector& d_block);

struct GobiStarOptions {
  GobiOptions base;                          // shared descent / loss settings
  std::map<std::string, Vec4> class_means;   // fallback demand for unseen tasks
};

/// Next-interval demand forecasts for every task the scheduler can see:
/// the LSTM extrapolates tasks with execution history, everything else
/// falls back to its class mean (zero when the class was never observed).
DemandMap predict_demands(const SimState& state, const nn::LstmPredictor& lstm,
                          const std::map<std::string, Vec4>& class_means);

/// Two-stage gradient scheduler: a frozen inner GobiScheduler proposes a
/// candidate, the LSTM forecasts next-interval demands, a simulator
/// lookahead prices the candidate, and that price feeds an extended scorer
/// whose decision block is then optimized as in the plain scheduler.
class GobiStarScheduler : public Scheduler {
 public:
  GobiStarScheduler(GobiModel frozen_gobi, GobiModel star, nn::LstmPredictor lstm,
                    GobiStarOptions opts = {});

  const char* name() const override { return "gobi_star"; }
  Decision schedule(const SimState& state) override;
  void observe(const SimState& state, const QoSRecord& rec) override;

  /// One online step of the composite loss; no-op before interval 1's pair.
  double fine_tune_star();

  /// Demand forecasts for every task the scheduler currently knows about.
  DemandMap predict_demands(const SimState& state) const;

  const GobiModel& frozen_model() const { return inner_.model(); }
  const GobiModel& star_model() const { return star_; }
  const nn::LstmPredictor& lstm() const { return lstm_; }

 private:
  GobiScheduler inner_;
  GobiModel star_;
  nn::LstmPredictor lstm_;
  GobiStarOptions opts_;
  nn::OptimizerState online_opt_;
  Rng rng_;
  std::unordered_map<int, int> prev_host_;

  struct PendingPair {
    Vector x;            // encoding with our committed decision and price slot
    Vector x0;           // warm-start input the descent began from
    Vector dbar_block;   // candidate's one-hot decision block
    Vector d_block;      // our continuous optimized decision block
    double lookahead_obj = 0.0;
    double y = 0.0;      // realized objective, filled by observe()
    int interval = -1;
    bool observed = false;
  };
  PendingPair last_;
  PendingPair pair_;
  bool pair_ready_ = false;
};

}  // namespace fogsim

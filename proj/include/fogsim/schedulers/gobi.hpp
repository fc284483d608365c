#pragma once

#include "fogsim/encoding.hpp"
#include "fogsim/nn/minimize.hpp"
#include "fogsim/nn/optimizer.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/schedulers/scheduler.hpp"

#include <unordered_map>

namespace fogsim {

/// QoS objective the gradient schedulers minimize: a convex combination of
/// energy and response-time terms, both already in [0, 1].
double objective(double aec, double art, double alpha = 0.5, double beta = 0.5);
double objective(const QoSRecord& rec, double alpha = 0.5, double beta = 0.5);

/// A trained scorer plus the input scaling it was trained with.
struct GobiModel {
  nn::Network net;
  Normalizer norm;
};

struct GobiOptions {
  double alpha = 0.5, beta = 0.5;
  nn::MinimizeOptions descent;   // input-gradient loop settings
  double online_lr = 1e-5;       // per-interval fine-tune step size
  double online_weight_decay = 1e-5;
  std::uint64_t seed = 1;
};

/// Gradient-based scheduler: encodes the state, warm-starts the decision
/// block from its previous decision, descends the scorer's input gradient
/// over that block, decodes by row argmax, and fine-tunes the scorer each
/// interval on the previously realized objective.
class GobiScheduler : public Scheduler {
 public:
  GobiScheduler(GobiModel model, GobiOptions opts = {});

  const char* name() const override { return "gobi"; }
  Decision schedule(const SimState& state) override;
  void observe(const SimState& state, const QoSRecord& rec) override;

  /// One online train step on the last observed (encoding, objective) pair.
  /// No-op (returns 0) until a pair from interval >= 1 has been observed.
  double fine_tune();

  const GobiModel& model() const { return model_; }
  GobiModel& mutable_model() { return model_; }

 private:
  GobiModel model_;
  GobiOptions opts_;
  nn::OptimizerState online_opt_;
  Rng rng_;
  std::unordered_map<int, int> prev_host_;  // last decision, task -> host

  Vector last_x_;       // encoding of the decision we returned this interval
  int last_interval_ = -1;
  bool pair_ready_ = false;
  Vector pair_x_;
  double pair_y_ = 0.0;
  int pair_interval_ = -1;

  friend class GobiStarScheduler;
};

}  // namespace fogsim

#include "fogsim/schedulers/gobi.hpp"

#include <stdexcept>

namespace fogsim {

double objective(double aec, double art, double alpha, double beta) {
  if (aec < 0.0 || aec > 1.0 || art < 0.0 || art > 1.0)
    throw std::invalid_argument("objective: aec/art must lie in [0,1]");
  return alpha * aec + beta * art;
}

double objective(const QoSRecord& rec, double alpha, double beta) {
  return objective(rec.aec, rec.art, alpha, beta);
}

GobiScheduler::GobiScheduler(GobiModel model, GobiOptions opts)
    : model_(std::move(model)),
      opts_(opts),
      online_opt_(nn::OptimizerState::make(
          model_.net,
          nn::AdamWConfig{opts.online_lr, 0.9, 0.999, 1e-8, opts.online_weight_decay})),
      rng_(opts.seed) {}

Decision GobiScheduler::schedule(const SimState& state) {
  FeatureEncoding enc = encode(state, Decision{}, &model_.norm);
  last_interval_ = state.t;
  if (enc.row_task_ids.empty()) {
    fine_tune();
    last_x_ = Vector();
    return {};
  }

  // Warm start: previous host where known, random one-hot otherwise.
  for (std::size_t r = 0; r < enc.row_task_ids.size(); ++r) {
    const auto it = prev_host_.find(enc.row_task_ids[r]);
    const int host = it != prev_host_.end()
                         ? it->second
                         : static_cast<int>(rng_.bounded(
                               static_cast<std::uint64_t>(enc.n_hosts)));
    enc.set_assignment(static_cast<int>(r), host);
  }

  const auto result = nn::minimize_input(model_.net, enc.x, enc.decision_mask(),
                                         opts_.descent);
  Decision d = enc.decode(result.x);

  fine_tune();

  // Remember what we committed to, for the next interval's fine-tune pair.
  enc.set_decision(d);
  last_x_ = enc.x;
  prev_host_.clear();
  for (const auto& pair : d.assignments) prev_host_[pair.task_id] = pair.host_id;
  return d;
}

void GobiScheduler::observe(const SimState& state, const QoSRecord& rec) {
  (void)state;
  if (last_interval_ != rec.interval || last_x_.size() == 0) return;
  pair_x_ = last_x_;
  pair_y_ = objective(rec, opts_.alpha, opts_.beta);
  pair_interval_ = rec.interval;
  pair_ready_ = true;
}

double GobiScheduler::fine_tune() {
  // The loss pairs the previous interval's encoding with its realized
  // objective; the interval-0 pair has no pre-history and is skipped.
  if (!pair_ready_ || pair_interval_ < 1) return 0.0;
  const Matrix x = pair_x_;
  Vector y(1);
  y[0] = pair_y_;
  return nn::train_step(model_.net, online_opt_, x, y);
}

}  // namespace fogsim

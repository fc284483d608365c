#include "fogsim/schedulers/gobi_star.hpp"

#include <stdexcept>

namespace fogsim {

double star_loss(double pred, double observed, double gobi_obj, double star_obj,
                 const Vector& dbar_block, const Vector& d_block) {
  if (dbar_block.size() != d_block.size())
    throw std::invalid_argument("star_loss: decision blocks differ in size");
  const double l1 = (observed - pred) * (observed - pred);
  if (gobi_obj >= star_obj) return l1;
  const double k = static_cast<double>(d_block.size());
  return l1 + (dbar_block - d_block).squaredNorm() / k;
}

GobiStarScheduler::GobiStarScheduler(GobiModel frozen_gobi, GobiModel star,
                                     nn::LstmPredictor lstm, GobiStarOptions opts)
    : inner_(std::move(frozen_gobi), opts.base),
      star_(std::move(star)),
      lstm_(std::move(lstm)),
      opts_(std::move(opts)),
      online_opt_(nn::OptimizerState::make(
          star_.net, nn::AdamWConfig{opts_.base.online_lr, 0.9, 0.999, 1e-8,
                                     opts_.base.online_weight_decay})),
      rng_(opts_.base.seed) {}

DemandMap predict_demands(const SimState& state, const nn::LstmPredictor& lstm,
                          const std::map<std::string, Vec4>& class_means) {
  DemandMap preds;
  auto class_mean = [&](const std::string& cls) -> Vec4 {
    const auto it = class_means.find(cls);
    if (it != class_means.end()) return it->second;
    return Vec4::Zero();  // no prior for this class, assume nothing
  };
  for (int id : state.scheduler_input_ids()) {
    if (const TaskState* ts = state.find_active(id)) {
      preds[id] = lstm_predict(lstm, ts->util_history).vec();
    } else if (const TaskState* ts2 = state.find_waiting(id)) {
      preds[id] = class_mean(ts2->spec.app_class);
    } else {
      preds[id] = class_mean(state.find_pending(id)->app_class);
    }
  }
  return preds;
}

DemandMap GobiStarScheduler::predict_demands(const SimState& state) const {
  return fogsim::predict_demands(state, lstm_, opts_.class_means);
}

Decision GobiStarScheduler::schedule(const SimState& state) {
  const Decision candidate = inner_.schedule(state);  // fine-tune in there no-ops: f stays frozen

  FeatureEncoding enc = encode(state, Decision{}, &star_.norm, 1);
  if (enc.row_task_ids.empty()) {
    fine_tune_star();
    last_ = PendingPair{};
    return {};
  }

  const DemandMap preds = predict_demands(state);
  const QoSRecord priced = lookahead(state, candidate, {}, preds);
  const double candidate_obj =
      objective(priced, opts_.base.alpha, opts_.base.beta);

  enc.set_extra(0, candidate_obj);
  for (std::size_t r = 0; r < enc.row_task_ids.size(); ++r) {
    const auto it = prev_host_.find(enc.row_task_ids[r]);
    const int host = it != prev_host_.end()
                         ? it->second
                         : static_cast<int>(rng_.bounded(
                               static_cast<std::uint64_t>(enc.n_hosts)));
    enc.set_assignment(static_cast<int>(r), host);
  }
  const Vector x0 = enc.x;

  // The price slot is outside decision_mask(), so it stays fixed here.
  const auto result =
      nn::minimize_input(star_.net, enc.x, enc.decision_mask(), opts_.base.descent);
  Decision d = enc.decode(result.x);

  fine_tune_star();

  last_ = PendingPair{};
  last_.x0 = x0;
  last_.d_block = enc.decision_block(result.x);
  FeatureEncoding cand_enc = enc;
  cand_enc.set_decision(candidate);
  last_.dbar_block = cand_enc.decision_block(cand_enc.x);
  enc.set_decision(d);
  last_.x = enc.x;
  last_.lookahead_obj = candidate_obj;
  last_.interval = state.t;

  prev_host_.clear();
  for (const auto& pair : d.assignments) prev_host_[pair.task_id] = pair.host_id;
  return d;
}

void GobiStarScheduler::observe(const SimState& state, const QoSRecord& rec) {
  (void)state;
  if (last_.interval != rec.interval || last_.x.size() == 0) return;
  last_.y = objective(rec, opts_.base.alpha, opts_.base.beta);
  last_.observed = true;
  pair_ = last_;
  pair_ready_ = true;
}

double GobiStarScheduler::fine_tune_star() {
  if (!pair_ready_ || pair_.interval < 1) return 0.0;

  double l1 = 0.0;
  Vector y(1);
  y[0] = pair_.y;
  nn::Gradients grads = nn::mse_gradients(star_.net, Matrix(pair_.x), y, &l1);

  const bool imitate = pair_.lookahead_obj < pair_.y;
  double l2 = 0.0;
  if (imitate) {
    const Vector diff = pair_.d_block - pair_.dbar_block;
    const double k = static_cast<double>(diff.size());
    l2 = diff.squaredNorm() / k;
    const double vnorm = diff.norm();
    if (vnorm > 0.0) {
      // One-step-unrolled imitation gradient: treating the final input as
      // x0 - lr * grad_x f*, d(L2)/dtheta needs the theta-derivative of the
      // directional input gradient, taken here by central differences of
      // the output's parameter gradients along the decision difference.
      Vector v = Vector::Zero(pair_.x0.size());
      const auto off = pair_.x0.size() - diff.size();
      v.segment(off, diff.size()) = diff / vnorm;
      const double h = 1e-3;
      const nn::Gradients gp = nn::output_gradients(star_.net, pair_.x0 + h * v);
      const nn::Gradients gm = nn::output_gradients(star_.net, pair_.x0 - h * v);
      const double scale = -(2.0 * opts_.base.descent.lr / k) * vnorm / (2.0 * h);
      for (std::size_t li = 0; li < grads.dW.size(); ++li) {
        grads.dW[li] += scale * (gp.dW[li] - gm.dW[li]);
        grads.db[li] += scale * (gp.db[li] - gm.db[li]);
      }
    }
  }
  nn::apply_update(star_.net, online_opt_, grads);
  return l1 + l2;
}

}  // namespace fogsim

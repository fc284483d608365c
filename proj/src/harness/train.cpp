#include "fogsim/harness/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "fogsim/harness/dataset.hpp"
#include "fogsim/nn/lstm.hpp"
#include "fogsim/nn/optimizer.hpp"
#include "fogsim/rng.hpp"

namespace fogsim::harness {
namespace {

bool converged(const std::vector<double>& curve, int window, double threshold) {
  if (static_cast<int>(curve.size()) < window + 1) return false;
  double sum = 0.0;
  for (std::size_t i = curve.size() - static_cast<std::size_t>(window); i < curve.size(); ++i)
    sum += std::abs(curve[i] - curve[i - 1]);
  return sum < threshold;
}

nlohmann::json report_to_json(const TrainReport& r) {
  return {{"epochs", r.epochs},
          {"final_train_loss", r.final_train_loss},
          {"test_loss", r.test_loss},
          {"curve", r.curve}};
}

}  // namespace

TrainReport train_scorer(const std::string& dataset_path, const std::string& out_model_path,
                         const TrainProtocol& proto) {
  const Dataset ds = load_dataset(dataset_path);
  if (ds.rows.empty()) throw std::runtime_error("dataset has no rows: " + dataset_path);
  const int n = static_cast<int>(ds.rows.size());
  const int dim = ds.meta.dim;

  // Decision block and extra slots keep identity scaling; everything before
  // them is min-max fitted on the dataset.
  const int identity_from =
      ds.meta.n_hosts * ds.meta.n_hosts * kResourceDims + ds.meta.n_hosts * kHostFeatureDims;
  std::vector<Vector> raw;
  raw.reserve(ds.rows.size());
  for (const auto& r : ds.rows) raw.push_back(r.x);
  const Normalizer norm = Normalizer::fit(raw, identity_from);

  Matrix X(dim, n);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    X.col(i) = norm.apply(ds.rows[static_cast<std::size_t>(i)].x);
    y[i] = ds.rows[static_cast<std::size_t>(i)].y;
  }

  Rng rng(splitmix64(proto.seed ^ ds.meta.seed));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  const int n_train = std::max(1, static_cast<int>(std::floor(proto.train_fraction * n)));
  std::vector<int> train_idx(order.begin(), order.begin() + n_train);
  std::vector<int> test_idx(order.begin() + n_train, order.end());

  nn::Network net = nn::make_scorer(dim, rng);
  nn::AdamWConfig acfg;
  acfg.lr = proto.lr;
  acfg.weight_decay = proto.weight_decay;
  nn::OptimizerState opt = nn::OptimizerState::make(net, acfg);

  TrainReport report;
  for (int epoch = 0; epoch < proto.max_epochs; ++epoch) {
    for (int i = n_train - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i + 1)));
      std::swap(train_idx[static_cast<std::size_t>(i)], train_idx[static_cast<std::size_t>(j)]);
    }
    double epoch_loss = 0.0;
    for (int start = 0; start < n_train; start += proto.batch) {
      const int b = std::min(proto.batch, n_train - start);
      Matrix xb(dim, b);
      Vector yb(b);
      for (int k = 0; k < b; ++k) {
        const int idx = train_idx[static_cast<std::size_t>(start + k)];
        xb.col(k) = X.col(idx);
        yb[k] = y[idx];
      }
      epoch_loss += nn::train_step(net, opt, xb, yb) * b;
    }
    epoch_loss /= n_train;
    if (!std::isfinite(epoch_loss))
      throw std::runtime_error("training diverged (non-finite loss)");
    report.curve.push_back(epoch_loss);
    report.epochs = epoch + 1;
    if (converged(report.curve, proto.convergence_window, proto.convergence_sum)) break;
  }
  report.final_train_loss = report.curve.back();

  if (!test_idx.empty()) {
    Matrix xt(dim, static_cast<int>(test_idx.size()));
    Vector yt(static_cast<int>(test_idx.size()));
    for (std::size_t k = 0; k < test_idx.size(); ++k) {
      xt.col(static_cast<Eigen::Index>(k)) = X.col(test_idx[k]);
      yt[static_cast<Eigen::Index>(k)] = y[test_idx[k]];
    }
    report.test_loss = nn::mse_loss(net, xt, yt);
  } else {
    report.test_loss = report.final_train_loss;
  }

  ScorerBundle bundle;
  bundle.model.net = std::move(net);
  bundle.model.norm = norm;
  bundle.meta = {{"kind", ds.meta.kind},   {"n_hosts", ds.meta.n_hosts},
                 {"extra_slots", ds.meta.extra_slots}, {"dim", ds.meta.dim},
                 {"delta", ds.meta.delta}, {"alpha", ds.meta.alpha},
                 {"beta", ds.meta.beta},   {"dataset_seed", ds.meta.seed}};
  bundle.training = report_to_json(report);
  save_scorer(out_model_path, bundle);
  return report;
}

std::vector<std::pair<std::string, std::vector<UtilizationSample>>> load_trace_sequences(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open traces file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("traces file is empty: " + path);
  nlohmann::json head;
  try {
    head = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed traces header in " + path + ": " + e.what());
  }
  if (head.value("format", std::string{}) != "fogsim-traces-v1")
    throw std::runtime_error("not a traces file: " + path);

  std::vector<std::pair<std::string, std::vector<UtilizationSample>>> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::vector<UtilizationSample> series;
    for (const auto& s : j.at("series")) {
      const auto vals = s.get<std::vector<double>>();
      if (vals.size() != 4)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": series sample must have 4 entries");
      series.push_back({vals[0], vals[1], vals[2], vals[3]});
    }
    out.emplace_back(j.at("app_class").get<std::string>(), std::move(series));
  }
  return out;
}

TrainReport train_lstm(const std::string& traces_path, const std::string& out_model_path,
                       const TrainProtocol& proto) {
  const auto pairs = load_trace_sequences(traces_path);

  std::map<std::string, Vec4> class_sums;
  std::map<std::string, int> class_counts;
  std::vector<std::vector<UtilizationSample>> sequences;
  for (const auto& [cls, series] : pairs) {
    for (const auto& s : series) {
      class_sums.try_emplace(cls, Vec4::Zero()).first->second += s.vec();
      ++class_counts[cls];
    }
    if (series.size() >= 2) sequences.push_back(series);
  }
  if (sequences.empty())
    throw std::runtime_error("no trainable sequences (need length >= 2) in " + traces_path);

  Rng rng(splitmix64(proto.seed ^ 0x6c73746dULL));
  nn::LstmPredictor lstm = nn::LstmPredictor::make(proto.lstm_hidden, rng);
  nn::LstmTrainState st;

  TrainReport report;
  for (int epoch = 0; epoch < proto.lstm_max_epochs; ++epoch) {
    const double loss = nn::lstm_train_epoch(lstm, st, sequences, proto.lstm_lr);
    if (!std::isfinite(loss)) throw std::runtime_error("training diverged (non-finite loss)");
    report.curve.push_back(loss);
    report.epochs = epoch + 1;
    if (converged(report.curve, proto.convergence_window, proto.convergence_sum)) break;
  }
  report.final_train_loss = report.curve.back();
  report.test_loss = report.final_train_loss;

  LstmBundle bundle;
  bundle.lstm = std::move(lstm);
  for (const auto& [cls, sum] : class_sums)
    bundle.class_means[cls] = sum / class_counts[cls];
  bundle.training = report_to_json(report);
  save_lstm(out_model_path, bundle);
  return report;
}

}  // namespace fogsim::harness

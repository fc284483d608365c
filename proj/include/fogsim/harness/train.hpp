#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fogsim/harness/model_io.hpp"
#include "fogsim/types.hpp"

namespace fogsim::harness {

/// Offline training settings shared by the scorer and predictor drivers.
/// Training stops at the epoch cap or once the summed absolute change of
/// the loss over the trailing window drops below `convergence_sum`.
struct TrainProtocol {
  double lr = 1e-3;
  double weight_decay = 1e-5;
  int batch = 128;
  int max_epochs = 300;
  int convergence_window = 10;
  double convergence_sum = 1e-2;
  double train_fraction = 0.8;
  std::uint64_t seed = 7;

  int lstm_hidden = 32;
  double lstm_lr = 1e-3;
  int lstm_max_epochs = 50;
};

struct TrainReport {
  int epochs = 0;
  double final_train_loss = 0.0;
  double test_loss = 0.0;
  std::vector<double> curve;  // per-epoch training loss
};

/// Fits normalization bounds on the dataset, trains a freshly initialized
/// scorer on a seeded 80/20 split, and writes the bundle. Works for both
/// plain and price-slot datasets (the kind is read from the file).
/// Throws on an empty dataset or a non-finite loss.
TrainReport train_scorer(const std::string& dataset_path, const std::string& out_model_path,
                         const TrainProtocol& proto = {});

/// Trains the demand predictor on a traces sidecar and writes the bundle
/// including per-class mean utilizations.
TrainReport train_lstm(const std::string& traces_path, const std::string& out_model_path,
                       const TrainProtocol& proto = {});

/// Parses a traces sidecar into (app_class, series) pairs.
std::vector<std::pair<std::string, std::vector<UtilizationSample>>> load_trace_sequences(
    const std::string& path);

}  // namespace fogsim::harness

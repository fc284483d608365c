#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "fogsim/nn/lstm.hpp"
#include "fogsim/schedulers/gobi.hpp"

namespace fogsim::harness {

/// Scorer network plus its input normalization and provenance, as stored
/// on disk. `meta` mirrors the dataset metadata the model was trained on.
struct ScorerBundle {
  GobiModel model;
  nlohmann::json meta;      // kind, n_hosts, extra_slots, dim, delta, alpha, beta
  nlohmann::json training;  // epochs, curve, test_loss
};

void save_scorer(const std::string& path, const ScorerBundle& b);
ScorerBundle load_scorer(const std::string& path);

/// Demand predictor plus the per-class mean utilizations observed in its
/// training traces (the fallback for tasks without history).
struct LstmBundle {
  nn::LstmPredictor lstm;
  std::map<std::string, Vec4> class_means;
  nlohmann::json training;
};

void save_lstm(const std::string& path, const LstmBundle& b);
LstmBundle load_lstm(const std::string& path);

}  // namespace fogsim::harness

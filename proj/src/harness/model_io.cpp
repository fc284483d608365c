#include "fogsim/harness/model_io.hpp"

#include <stdexcept>
#include <vector>

#include "fogsim/nn/serialize.hpp"

namespace fogsim::harness {
namespace {

nlohmann::json vector_to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto vals = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return v;
}

}  // namespace

void save_scorer(const std::string& path, const ScorerBundle& b) {
  nlohmann::json j = {
      {"format", "fogsim-scorer-v1"},
      {"network", nn::to_json(b.model.net)},
      {"normalizer",
       {{"lo", vector_to_json(b.model.norm.lo)}, {"hi", vector_to_json(b.model.norm.hi)}}},
      {"meta", b.meta},
      {"training", b.training},
  };
  nn::save_json(path, j);
}

ScorerBundle load_scorer(const std::string& path) {
  const nlohmann::json j = nn::load_json(path);
  if (j.value("format", std::string{}) != "fogsim-scorer-v1")
    throw std::runtime_error("not a scorer bundle: " + path);
  ScorerBundle b;
  b.model.net = nn::network_from_json(j.at("network"));
  b.model.norm.lo = vector_from_json(j.at("normalizer").at("lo"));
  b.model.norm.hi = vector_from_json(j.at("normalizer").at("hi"));
  b.meta = j.value("meta", nlohmann::json::object());
  b.training = j.value("training", nlohmann::json::object());
  return b;
}

void save_lstm(const std::string& path, const LstmBundle& b) {
  nlohmann::json means = nlohmann::json::object();
  for (const auto& [cls, v] : b.class_means)
    means[cls] = std::vector<double>{v[0], v[1], v[2], v[3]};
  nlohmann::json j = {
      {"format", "fogsim-lstm-bundle-v1"},
      {"lstm", nn::to_json(b.lstm)},
      {"class_means", means},
      {"training", b.training},
  };
  nn::save_json(path, j);
}

LstmBundle load_lstm(const std::string& path) {
  const nlohmann::json j = nn::load_json(path);
  if (j.value("format", std::string{}) != "fogsim-lstm-bundle-v1")
    throw std::runtime_error("not an LSTM bundle: " + path);
  LstmBundle b;
  b.lstm = nn::lstm_from_json(j.at("lstm"));
  for (const auto& [cls, arr] : j.at("class_means").items()) {
    const auto vals = arr.get<std::vector<double>>();
    if (vals.size() != 4) throw std::runtime_error("class mean must have 4 entries");
    b.class_means[cls] = Vec4(vals[0], vals[1], vals[2], vals[3]);
  }
  b.training = j.value("training", nlohmann::json::object());
  return b;
}

}  // namespace fogsim::harness

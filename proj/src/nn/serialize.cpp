#include "fogsim/nn/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace fogsim::nn {

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json flat = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(flat)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& flat = j.at("data");
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols)
    throw std::invalid_argument("matrix payload size mismatch");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[k++].get<double>();
  return m;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

nlohmann::json to_json(const Network& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers)
    layers.push_back({{"act", to_string(layer.act)},
                      {"W", matrix_to_json(layer.W)},
                      {"b", vector_to_json(layer.b)}});
  return {{"format", "fogsim-network-v1"}, {"layers", std::move(layers)}};
}

Network network_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "fogsim-network-v1")
    throw std::invalid_argument("not a network file");
  Network net;
  for (const auto& lj : j.at("layers")) {
    DenseLayer layer;
    layer.act = activation_from_string(lj.at("act").get<std::string>());
    layer.W = matrix_from_json(lj.at("W"));
    layer.b = vector_from_json(lj.at("b"));
    net.layers.push_back(std::move(layer));
  }
  if (net.layers.empty()) throw std::invalid_argument("network file has no layers");
  return net;
}

nlohmann::json to_json(const LstmPredictor& p) {
  return {{"format", "fogsim-lstm-v1"},
          {"hidden", p.hidden},
          {"Wi", matrix_to_json(p.Wi)}, {"Ui", matrix_to_json(p.Ui)},
          {"bi", vector_to_json(p.bi)},
          {"Wf", matrix_to_json(p.Wf)}, {"Uf", matrix_to_json(p.Uf)},
          {"bf", vector_to_json(p.bf)},
          {"Wo", matrix_to_json(p.Wo)}, {"Uo", matrix_to_json(p.Uo)},
          {"bo", vector_to_json(p.bo)},
          {"Wg", matrix_to_json(p.Wg)}, {"Ug", matrix_to_json(p.Ug)},
          {"bg", vector_to_json(p.bg)},
          {"Wy", matrix_to_json(p.Wy)}, {"by", vector_to_json(p.by)},
          {"feature_scale", vector_to_json(Vector(p.feature_scale))}};
}

LstmPredictor lstm_from_json(const nlohmann::json& j) {
  if (j.at("format").get<std::string>() != "fogsim-lstm-v1")
    throw std::invalid_argument("not an lstm file");
  LstmPredictor p;
  p.hidden = j.at("hidden").get<int>();
  p.Wi = matrix_from_json(j.at("Wi"));
  p.Ui = matrix_from_json(j.at("Ui"));
  p.bi = vector_from_json(j.at("bi"));
  p.Wf = matrix_from_json(j.at("Wf"));
  p.Uf = matrix_from_json(j.at("Uf"));
  p.bf = vector_from_json(j.at("bf"));
  p.Wo = matrix_from_json(j.at("Wo"));
  p.Uo = matrix_from_json(j.at("Uo"));
  p.bo = vector_from_json(j.at("bo"));
  p.Wg = matrix_from_json(j.at("Wg"));
  p.Ug = matrix_from_json(j.at("Ug"));
  p.bg = vector_from_json(j.at("bg"));
  p.Wy = matrix_from_json(j.at("Wy"));
  p.by = vector_from_json(j.at("by"));
  p.feature_scale = Vec4(vector_from_json(j.at("feature_scale")));
  return p;
}

void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return nlohmann::json::parse(in);
}

}  // namespace fogsim::nn

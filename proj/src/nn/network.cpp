#include "fogsim/nn/network.hpp"

#include <cmath>
#include <stdexcept>

namespace fogsim::nn {

const char* to_string(Activation act) {
  switch (act) {
    case Activation::softplus: return "softplus";
    case Activation::tanhshrink: return "tanhshrink";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh_fn: return "tanh";
  }
  return "?";
}

Activation activation_from_string(const std::string& name) {
  for (auto act : {Activation::softplus, Activation::tanhshrink, Activation::sigmoid,
                   Activation::tanh_fn})
    if (name == to_string(act)) return act;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

double sigmoid1(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Overflow-safe log(1 + e^z).
double softplus1(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

Matrix activate(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::softplus: return z.unaryExpr([](double v) { return softplus1(v); });
    case Activation::tanhshrink:
      return z.unaryExpr([](double v) { return v - std::tanh(v); });
    case Activation::sigmoid: return z.unaryExpr([](double v) { return sigmoid1(v); });
    case Activation::tanh_fn: return z.unaryExpr([](double v) { return std::tanh(v); });
  }
  throw std::logic_error("unreachable");
}

Matrix activate_grad(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::softplus: return z.unaryExpr([](double v) { return sigmoid1(v); });
    case Activation::tanhshrink:
      return z.unaryExpr([](double v) {
        const double t = std::tanh(v);
        return t * t;
      });
    case Activation::sigmoid:
      return z.unaryExpr([](double v) {
        const double s = sigmoid1(v);
        return s * (1.0 - s);
      });
    case Activation::tanh_fn:
      return z.unaryExpr([](double v) {
        const double t = std::tanh(v);
        return 1.0 - t * t;
      });
  }
  throw std::logic_error("unreachable");
}

Matrix Network::forward(const Matrix& x) const {
  Matrix a = x;
  for (const auto& layer : layers)
    a = activate(layer.act, (layer.W * a).colwise() + layer.b);
  return a;
}

Vector Network::forward(const Vector& x) const {
  return forward(Matrix(x)).col(0);
}

double Network::scalar(const Vector& x) const {
  if (out_dim() != 1) throw std::logic_error("scalar(): network has multiple outputs");
  return forward(x)(0);
}

DenseLayer make_layer(int in, int out, Activation act, Rng& rng) {
  DenseLayer layer;
  const double limit = std::sqrt(6.0 / (in + out));  // Glorot uniform
  layer.W = Matrix::NullaryExpr(out, in, [&]() { return rng.uniform(-limit, limit); });
  layer.b = Vector::Zero(out);
  layer.act = act;
  return layer;
}

Network make_scorer(int in_dim, Rng& rng) {
  Network net;
  net.layers.push_back(make_layer(in_dim, 128, Activation::softplus, rng));
  net.layers.push_back(make_layer(128, 64, Activation::tanhshrink, rng));
  net.layers.push_back(make_layer(64, 1, Activation::sigmoid, rng));
  return net;
}

Vector input_gradient(const Network& net, const Vector& x) {
  // Cache pre-activations on the way up, then pull W^T (act'(z) .* g) back
  // down; a single dense layer reduces to W^T act'(Wx + b).
  std::vector<Vector> zs;
  zs.reserve(net.layers.size());
  Vector a = x;
  for (const auto& layer : net.layers) {
    Vector z = layer.W * a + layer.b;
    a = activate(layer.act, Matrix(z)).col(0);
    zs.push_back(std::move(z));
  }
  Vector g = Vector::Ones(net.out_dim());
  for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
    const auto& layer = net.layers[static_cast<std::size_t>(l)];
    const Vector dz =
        activate_grad(layer.act, Matrix(zs[static_cast<std::size_t>(l)])).col(0);
    g = layer.W.transpose() * dz.cwiseProduct(g).eval();
  }
  return g;
}

}  // namespace fogsim::nn

#include "fogsim/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fogsim::nn {

OptimizerState OptimizerState::make(const Network& net, AdamWConfig cfg) {
  OptimizerState opt;
  opt.cfg = cfg;
  for (const auto& layer : net.layers) {
    Slot s;
    s.mW = Matrix::Zero(layer.W.rows(), layer.W.cols());
    s.vW = s.mW;
    s.mb = Vector::Zero(layer.b.size());
    s.vb = s.mb;
    opt.slots.push_back(std::move(s));
  }
  return opt;
}

double mse_loss(const Network& net, const Matrix& x, const Vector& y) {
  const Matrix out = net.forward(x);
  return (out.row(0).transpose() - y).squaredNorm() / static_cast<double>(y.size());
}

Gradients mse_gradients(const Network& net, const Matrix& x, const Vector& y,
                        double* loss_out) {
  if (net.out_dim() != 1)
    throw std::logic_error("mse_gradients: single-output networks only");
  const auto n = static_cast<double>(x.cols());
  if (y.size() != x.cols())
    throw std::invalid_argument("mse_gradients: one target per sample");

  // Forward pass keeping each layer's input and pre-activation.
  std::vector<Matrix> inputs, zs;
  Matrix a = x;
  for (const auto& layer : net.layers) {
    inputs.push_back(a);
    Matrix z = (layer.W * a).colwise() + layer.b;
    a = activate(layer.act, z);
    zs.push_back(std::move(z));
  }

  const Matrix residual = a.row(0) - y.transpose();
  if (loss_out) *loss_out = residual.squaredNorm() / n;

  Gradients grads;
  grads.dW.resize(net.layers.size());
  grads.db.resize(net.layers.size());
  Matrix g = (2.0 / n) * residual;  // dL/da for the output layer, 1 x n
  for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const auto& layer = net.layers[li];
    const Matrix dz = activate_grad(layer.act, zs[li]).cwiseProduct(g);
    grads.dW[li] = dz * inputs[li].transpose();
    grads.db[li] = dz.rowwise().sum();
    if (l > 0) g = layer.W.transpose() * dz;
  }
  return grads;
}

Gradients output_gradients(const Network& net, const Vector& x) {
  if (net.out_dim() != 1)
    throw std::logic_error("output_gradients: single-output networks only");
  std::vector<Matrix> inputs, zs;
  Matrix a = Matrix(x);
  for (const auto& layer : net.layers) {
    inputs.push_back(a);
    Matrix z = (layer.W * a).colwise() + layer.b;
    a = activate(layer.act, z);
    zs.push_back(std::move(z));
  }
  Gradients grads;
  grads.dW.resize(net.layers.size());
  grads.db.resize(net.layers.size());
  Matrix g = Matrix::Ones(1, 1);
  for (int l = static_cast<int>(net.layers.size()) - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const auto& layer = net.layers[li];
    const Matrix dz = activate_grad(layer.act, zs[li]).cwiseProduct(g);
    grads.dW[li] = dz * inputs[li].transpose();
    grads.db[li] = dz.rowwise().sum();
    if (l > 0) g = layer.W.transpose() * dz;
  }
  return grads;
}

namespace {

template <typename T>
void adamw_update(T& param, T& m, T& v, const T& grad, const AdamWConfig& cfg,
                  double bias1, double bias2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const T mhat = m / bias1;
  const T vhat = v / bias2;
  param -= cfg.lr * ((mhat.array() / (vhat.array().sqrt() + cfg.eps)) +
                     cfg.weight_decay * param.array())
                        .matrix();
}

}  // namespace

void apply_update(Network& net, OptimizerState& opt, const Gradients& grads) {
  if (opt.slots.size() != net.layers.size())
    throw std::logic_error("apply_update: optimizer built for a different network");
  opt.steps += 1;
  const double bias1 = 1.0 - std::pow(opt.cfg.beta1, static_cast<double>(opt.steps));
  const double bias2 = 1.0 - std::pow(opt.cfg.beta2, static_cast<double>(opt.steps));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& layer = net.layers[l];
    auto& slot = opt.slots[l];
    adamw_update(layer.W, slot.mW, slot.vW, grads.dW[l], opt.cfg, bias1, bias2);
    adamw_update(layer.b, slot.mb, slot.vb, grads.db[l], opt.cfg, bias1, bias2);
  }
}

double train_step(Network& net, OptimizerState& opt, const Matrix& x, const Vector& y) {
  double loss = 0.0;
  const Gradients grads = mse_gradients(net, x, y, &loss);
  apply_update(net, opt, grads);
  return loss;
}

}  // namespace fogsim::nn

#pragma once

#include "fogsim/rng.hpp"
#include "fogsim/types.hpp"

#include <string>
#include <vector>

namespace fogsim::nn {

enum class Activation { softplus, tanhshrink, sigmoid, tanh_fn };

const char* to_string(Activation act);
Activation activation_from_string(const std::string& name);

// Elementwise activation and its derivative, evaluated at pre-activations.
Matrix activate(Activation act, const Matrix& z);
Matrix activate_grad(Activation act, const Matrix& z);

struct DenseLayer {
  Matrix W;
  Vector b;
  Activation act = Activation::sigmoid;

  int in_dim() const { return static_cast<int>(W.cols()); }
  int out_dim() const { return static_cast<int>(W.rows()); }
};

struct Network {
  std::vector<DenseLayer> layers;

  int in_dim() const { return layers.front().in_dim(); }
  int out_dim() const { return layers.back().out_dim(); }

  Vector forward(const Vector& x) const;
  Matrix forward(const Matrix& x) const;  // columns are samples
  double scalar(const Vector& x) const;   // single-output convenience
};

DenseLayer make_layer(int in, int out, Activation act, Rng& rng);

/// The objective scorer used by the gradient schedulers: three dense blocks,
/// softplus(128) then tanhshrink(64) then a sigmoid output in [0, 1].
Network make_scorer(int in_dim, Rng& rng);

/// Gradient of the sum of outputs with respect to the input; for the usual
/// single-output scorer this is just the gradient of the score.
Vector input_gradient(const Network& net, const Vector& x);

}  // namespace fogsim::nn

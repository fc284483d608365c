#pragma once

#include "fogsim/nn/network.hpp"

namespace fogsim::nn {

/// AdamW: Adam moment estimates with decoupled weight decay.
struct AdamWConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-5;
};

struct OptimizerState {
  AdamWConfig cfg;
  long steps = 0;
  struct Slot {
    Matrix mW, vW;
    Vector mb, vb;
  };
  std::vector<Slot> slots;

  static OptimizerState make(const Network& net, AdamWConfig cfg = {});
};

struct Gradients {
  std::vector<Matrix> dW;
  std::vector<Vector> db;
};

/// Mean-squared-error loss and parameter gradients for a single-output
/// network over a batch (columns of `x` are samples).
double mse_loss(const Network& net, const Matrix& x, const Vector& y);
Gradients mse_gradients(const Network& net, const Matrix& x, const Vector& y,
                        double* loss_out = nullptr);

/// Parameter gradients of the raw scalar output at one input (no loss).
Gradients output_gradients(const Network& net, const Vector& x);

void apply_update(Network& net, OptimizerState& opt, const Gradients& grads);

/// One optimizer step on a batch; returns the pre-update loss.
double train_step(Network& net, OptimizerState& opt, const Matrix& x, const Vector& y);

}  // namespace fogsim::nn

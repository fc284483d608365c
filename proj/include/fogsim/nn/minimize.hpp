#pragma once

#include "fogsim/nn/network.hpp"

namespace fogsim::nn {

struct MinimizeOptions {
  double lr = 0.8;        // Adam step size on the input
  double epsilon = 1e-3;  // stop once max |gradient| over free coords is below this
  int max_iters = 100;
  double lo = 0.0, hi = 1.0;  // box the free coordinates are clamped to
};

struct MinimizeResult {
  Vector x;
  double value;
  int iterations = 0;
  bool converged = false;
};

/// Gradient descent on the network input: only coordinates with a true
/// `free_mask` entry move, everything else stays exactly at `x0`. Returns the
/// best point seen, so the result never scores worse than the start.
MinimizeResult minimize_input(const Network& net, const Vector& x0,
                              const std::vector<bool>& free_mask,
                              const MinimizeOptions& opts = {});

}  // namespace fogsim::nn

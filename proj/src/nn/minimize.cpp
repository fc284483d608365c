#include "fogsim/nn/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fogsim::nn {

MinimizeResult minimize_input(const Network& net, const Vector& x0,
                              const std::vector<bool>& free_mask,
                              const MinimizeOptions& opts) {
  if (net.out_dim() != 1)
    throw std::logic_error("minimize_input: single-output networks only");
  if (static_cast<int>(free_mask.size()) != x0.size())
    throw std::invalid_argument("minimize_input: mask size must match input size");

  Vector x = x0;
  MinimizeResult best{x0, net.scalar(x0), 0, false};

  // Adam on the free coordinates only.
  Vector m = Vector::Zero(x.size());
  Vector v = Vector::Zero(x.size());
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    Vector g = input_gradient(net, x);
    double gmax = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      if (!free_mask[static_cast<std::size_t>(i)]) {
        g[i] = 0.0;
        continue;
      }
      gmax = std::max(gmax, std::abs(g[i]));
    }
    best.iterations = iter;
    if (gmax <= opts.epsilon) {
      best.converged = true;
      break;
    }
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const double bias1 = 1.0 - std::pow(beta1, iter);
    const double bias2 = 1.0 - std::pow(beta2, iter);
    for (int i = 0; i < x.size(); ++i) {
      if (!free_mask[static_cast<std::size_t>(i)]) continue;
      const double step = opts.lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + eps);
      x[i] = std::clamp(x[i] - step, opts.lo, opts.hi);
    }
    const double value = net.scalar(x);
    if (value < best.value) {
      best.value = value;
      best.x = x;
    }
  }
  return best;
}

}  // namespace fogsim::nn

#include "fogsim/schedulers/ga.hpp"

#include <algorithm>
#include <stdexcept>

namespace fogsim {

void GaConfig::validate() const {
  if (population < 2) throw std::invalid_argument("ga: population must be >= 2");
  if (generations < 0) throw std::invalid_argument("ga: negative generations");
  if (mutation_rate < 0.0 || mutation_rate > 1.0 || crossover_rate < 0.0 ||
      crossover_rate > 1.0)
    throw std::invalid_argument("ga: rates must lie in [0,1]");
  if (elitism < 0 || elitism > population)
    throw std::invalid_argument("ga: elitism outside [0, population]");
}

GaScheduler::GaScheduler(GobiModel model, GaConfig cfg, std::uint64_t seed)
    : model_(std::move(model)), cfg_(cfg), rng_(seed) {
  cfg_.validate();
}

Decision GaScheduler::schedule(const SimState& state) {
  FeatureEncoding enc = encode(state, Decision{}, &model_.norm);
  const auto rows = enc.row_task_ids.size();
  if (rows == 0) return {};
  const int n_hosts = enc.n_hosts;

  using Genome = std::vector<int>;  // host index per decision row
  const auto pop_size = static_cast<std::size_t>(cfg_.population);
  std::vector<Genome> pop(pop_size, Genome(rows));
  for (auto& g : pop)
    for (auto& gene : g) gene = static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(n_hosts)));

  // All genomes of a generation are scored in one batched forward pass.
  Matrix batch(enc.x.size(), static_cast<Eigen::Index>(pop_size));
  auto evaluate = [&](const std::vector<Genome>& genomes) {
    for (std::size_t i = 0; i < genomes.size(); ++i) {
      batch.col(static_cast<Eigen::Index>(i)) = enc.x;
      const auto off = enc.decision_offset();
      auto col = batch.col(static_cast<Eigen::Index>(i));
      col.segment(off, static_cast<Eigen::Index>(rows) * n_hosts).setZero();
      for (std::size_t r = 0; r < rows; ++r)
        col[off + static_cast<Eigen::Index>(r) * n_hosts + genomes[i][r]] = 1.0;
    }
    const Matrix out = model_.net.forward(batch);
    return Vector(out.row(0).transpose());
  };

  Vector scores = evaluate(pop);
  auto best_of = [&]() {
    Eigen::Index best = 0;
    scores.minCoeff(&best);
    return static_cast<std::size_t>(best);
  };

  auto tournament = [&]() -> const Genome& {
    std::size_t winner = static_cast<std::size_t>(rng_.bounded(pop_size));
    for (int i = 0; i < 2; ++i) {
      const auto c = static_cast<std::size_t>(rng_.bounded(pop_size));
      if (scores[static_cast<Eigen::Index>(c)] < scores[static_cast<Eigen::Index>(winner)])
        winner = c;
    }
    return pop[winner];
  };

  for (int gen = 0; gen < cfg_.generations; ++gen) {
    std::vector<Genome> next;
    next.reserve(pop_size);
    // Elites carry over unchanged, so the best score never regresses.
    std::vector<std::size_t> order(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
    });
    for (int e = 0; e < cfg_.elitism && next.size() < pop_size; ++e)
      next.push_back(pop[order[static_cast<std::size_t>(e)]]);

    while (next.size() < pop_size) {
      Genome child = tournament();
      if (rng_.uniform() < cfg_.crossover_rate && rows > 1) {
        const Genome& other = tournament();
        const auto cut = 1 + rng_.bounded(static_cast<std::uint64_t>(rows - 1));
        for (std::size_t r = cut; r < rows; ++r) child[r] = other[r];
      }
      for (auto& gene : child)
        if (rng_.uniform() < cfg_.mutation_rate)
          gene = static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(n_hosts)));
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    scores = evaluate(pop);
  }

  const Genome& winner = pop[best_of()];
  Decision d;
  for (std::size_t r = 0; r < rows; ++r)
    d.assignments.push_back({enc.row_task_ids[r], winner[r]});
  return d;
}

}  // namespace fogsim

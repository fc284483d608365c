#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fogsim/harness/config.hpp"
#include "fogsim/types.hpp"

namespace fogsim::harness {

// Seed salts so the workload stream, the scheduler and the trace catalog
// draw from independent deterministic streams derived from one run seed.
inline constexpr std::uint64_t kWorkloadSeedSalt = 0x776f726b6c6f6164ULL;
inline constexpr std::uint64_t kSchedulerSeedSalt = 0x7363686564756c65ULL;
inline constexpr std::uint64_t kCatalogSeedSalt = 0x747261636573ULL;
inline constexpr std::uint64_t kCandidateSeedSalt = 0x676f6269ULL;

/// First line of every dataset file.
struct DatasetMeta {
  std::string kind;  // "f" (plain scorer) or "f*" (price-slot scorer)
  int n_hosts = 0;
  int extra_slots = 0;
  int dim = 0;
  double delta = 300.0;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  double beta = 0.5;
};

/// One (encoded state+decision, realized objective) sample. The last two
/// fields are only present in price-slot datasets: the candidate decision
/// of the frozen scorer (host per occupied row, -1 when absent) and the
/// lookahead estimate that was written into the extra slot.
struct TrainingRow {
  Vector x;
  double y = 0.0;
  std::vector<int> dbar_hosts;
  double lookahead_obj = 0.0;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<TrainingRow> rows;
};

/// Simulates `n_intervals` under the uniform-random scheduler and writes one
/// raw (unnormalized) row per interval, plus a `<out>.traces.jsonl` sidecar
/// with every task's granted-utilization series for predictor training.
void generate_dataset(const ExperimentConfig& cfg, int n_intervals, const std::string& out_path);

/// Same simulation, but each interval additionally asks the frozen scorer
/// for a candidate decision, prices it with predicted demands through the
/// one-step lookahead, and stores that price in the row's extra slot.
void generate_dataset_star(const ExperimentConfig& cfg, int n_intervals,
                           const std::string& scorer_path, const std::string& lstm_path,
                           const std::string& out_path);

Dataset load_dataset(const std::string& path);

std::string traces_sidecar_path(const std::string& dataset_path);

/// Trace catalog an experiment draws its tasks from, honoring the config's
/// synthetic/file source selection.
TraceCatalog make_catalog(const ExperimentConfig& cfg);

/// Expands per-row candidate hosts into the flat one-hot decision block.
Vector dbar_block_from_hosts(const std::vector<int>& dbar_hosts, int n_hosts);

}  // namespace fogsim::harness

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fogsim/harness/config.hpp"
#include "fogsim/harness/metrics.hpp"
#include "fogsim/schedulers/scheduler.hpp"

namespace fogsim::harness {

/// Builds the scheduler named in the config. Gradient and evolutionary
/// schedulers load their scorer from `model_path` when given and fall back
/// to a seeded random initialization otherwise; the two-stage scheduler
/// requires all three model paths.
std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& cfg);

struct RunResult {
  std::vector<QoSRecord> rows;
  Aggregates agg;
  std::vector<TaskRecord> tasks;
  nlohmann::json manifest;      // what result.json holds
  std::string qos_csv_path;     // empty when outputs were not written
  std::string result_json_path;
};

/// Runs the configured experiment end to end, streaming one QoS row per
/// interval to `<out_dir>/qos.csv` and writing `<out_dir>/result.json`.
/// Wall-clock timing lives in the CSV's last column and the manifest's
/// "timing" key; everything else is reproducible byte-for-byte from
/// config + seed.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Same simulation without touching the filesystem.
RunResult run_in_memory(const ExperimentConfig& cfg);

/// Runs the config's scheduler as SLO reference and returns the per-class
/// 95th-percentile response times. Classes without completions are omitted
/// with a warning on stderr.
std::map<std::string, double> calibrate_slo(const ExperimentConfig& cfg);

void write_psi_table(const std::string& path, const std::map<std::string, double>& psi,
                     const std::string& reference_scheduler);
std::map<std::string, double> load_psi_table(const std::string& path);

}  // namespace fogsim::harness

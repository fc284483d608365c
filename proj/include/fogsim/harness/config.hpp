#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fogsim/nn/minimize.hpp"
#include "fogsim/schedulers/ga.hpp"
#include "fogsim/types.hpp"
#include "fogsim/workload.hpp"

namespace fogsim::harness {

// Scheduler selection plus the knobs each family understands. Unused
// fields are ignored by schedulers that do not need them.
struct SchedulerConfig {
  std::string name = "random";  // random | lr_mmt | mad_mc | ga | gobi | gobi_star
  std::string model_path;       // scorer bundle for ga / gobi, and the frozen scorer for gobi_star
  std::string star_model_path;  // second-stage scorer bundle for gobi_star
  std::string lstm_path;        // demand predictor bundle for gobi_star
  nn::MinimizeOptions descent;
  double online_lr = 1e-5;
  double online_weight_decay = 1e-5;
  GaConfig ga;
};

struct ExperimentConfig {
  std::string hosts = "h10";       // h10 | h50 | custom
  std::vector<Host> custom_hosts;  // used only when hosts == "custom"
  double delta = 300.0;
  int intervals = 100;
  double alpha = 0.5;
  double beta = 0.5;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  SchedulerConfig scheduler;
  WorkloadConfig workload;

  void validate() const;
  std::vector<Host> make_hosts() const;

  // Canonical JSON with every field filled in. out_dir and file paths are
  // deliberately excluded so the hash identifies the experiment itself,
  // not where its artifacts happen to live.
  nlohmann::json semantic_json() const;
  std::uint64_t config_hash() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

// Built-in host fleets. "h10" is a 10-machine edge/cloud mix, "h50" the
// same mix scaled five-fold.
std::vector<Host> host_catalog(const std::string& preset);

// Writes {"error": message, ...context} as a single line to stderr.
void emit_error_json(const std::string& message, const nlohmann::json& context = {});

}  // namespace fogsim::harness

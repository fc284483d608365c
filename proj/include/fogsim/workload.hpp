#pragma once

#include "fogsim/rng.hpp"
#include "fogsim/types.hpp"

#include <map>
#include <string>

namespace fogsim {

/// One pool of demand series plus the knobs that turn a series into a task:
/// the instruction budget as a factor range on (mean ips * delta), and the
/// deadline as a multiple of the interval length.
struct TraceClass {
  std::string name;
  std::vector<std::vector<UtilizationSample>> series;
  double budget_lo = 6.0, budget_hi = 20.0;  // lifetime factor, in intervals
  double deadline_factor = 20.0;             // sla = factor * delta

  void validate() const;
};

struct TraceCatalog {
  std::vector<TraceClass> classes;

  const TraceClass& by_name(const std::string& name) const;
  void validate() const;
  /// Mean demand per class, the prior used for tasks with no history yet.
  std::map<std::string, Vec4> class_means() const;
};

struct WorkloadConfig {
  double lambda = 1.2;                    // mean arrivals per interval
  std::vector<double> app_mix;            // probability per catalog class
  std::string trace_source = "synthetic"; // or "file"
  std::string trace_file;                 // when trace_source == "file"

  void validate(std::size_t n_classes) const;
};

/// Reads a trace CSV (columns series_id,interval,ips,ram_mb,disk_bw,net_bw,
/// header required) into a single-class catalog. Malformed rows report
/// their line number.
TraceCatalog load_traces(const std::string& path);

/// Builds the three synthetic demand-profile pools (compute-heavy,
/// bandwidth-heavy, mixed), deterministically from the seed.
TraceCatalog synthetic_catalog(std::uint64_t seed, int series_per_class = 64);

/// Draws one interval's arrivals: a Poisson count of tasks, each with a
/// class from app_mix and a series, budget and deadline from the catalog.
class WorkloadGenerator {
 public:
  WorkloadGenerator(WorkloadConfig cfg, TraceCatalog catalog, double delta,
                    std::uint64_t seed);

  std::vector<TaskSpec> arrivals(int t);
  const TraceCatalog& catalog() const { return catalog_; }

 private:
  WorkloadConfig cfg_;
  TraceCatalog catalog_;
  double delta_;
  Rng rng_;
  int next_id_ = 0;
};

}  // namespace fogsim

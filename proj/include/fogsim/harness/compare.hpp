#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fogsim::harness {

/// Joins two or more run manifests into one table for external plotting.
/// Throws on fewer than two inputs; mismatched workload seeds only warn.
struct CompareTable {
  nlohmann::json json;  // {"runs": [...]}, one entry per input
  std::string csv;      // same content, one header + one line per run
};

CompareTable compare_runs(const std::vector<std::string>& result_paths);

}  // namespace fogsim::harness

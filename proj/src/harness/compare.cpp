#include "fogsim/harness/compare.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace fogsim::harness {

CompareTable compare_runs(const std::vector<std::string>& result_paths) {
  if (result_paths.size() < 2)
    throw std::invalid_argument("comparison needs at least two run results");

  std::vector<nlohmann::json> manifests;
  for (const auto& path : result_paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open run result: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("malformed run result " + path + ": " + e.what());
    }
    if (j.value("format", std::string{}) != "fogsim-run-v1")
      throw std::runtime_error("not a run result: " + path);
    manifests.push_back(std::move(j));
  }

  const auto seed_of = [](const nlohmann::json& m) { return m.at("seed").get<std::uint64_t>(); };
  for (std::size_t i = 1; i < manifests.size(); ++i)
    if (seed_of(manifests[i]) != seed_of(manifests[0])) {
      std::cerr << "warning: comparing runs with different workload seeds ("
                << seed_of(manifests[0]) << " vs " << seed_of(manifests[i])
                << "); metrics are not paired\n";
      break;
    }

  CompareTable table;
  table.json = {{"format", "fogsim-compare-v1"}, {"runs", nlohmann::json::array()}};

  const double first_obj =
      manifests[0].at("aggregates").at("mean_objective").get<double>();

  std::string csv =
      "scheduler,seed,mean_objective,delta_objective_vs_first,mean_aec,mean_art,"
      "total_energy_kwh,mean_response,slo_violation_fraction,fairness,"
      "mean_wait_intervals,n_completed,n_migrations,total_cost,mean_scheduling_time\n";

  for (const auto& m : manifests) {
    const auto& agg = m.at("aggregates");
    const double obj = agg.at("mean_objective").get<double>();
    nlohmann::json row = {
        {"scheduler", m.at("scheduler").get<std::string>()},
        {"seed", seed_of(m)},
        {"mean_objective", obj},
        {"delta_objective_vs_first", obj - first_obj},
        {"mean_aec", agg.at("mean_aec").get<double>()},
        {"mean_art", agg.at("mean_art").get<double>()},
        {"total_energy_kwh", agg.at("total_energy_kwh").get<double>()},
        {"mean_response", agg.at("mean_response").get<double>()},
        {"slo_violation_fraction", agg.at("slo_violation_fraction").get<double>()},
        {"fairness", agg.at("fairness").get<double>()},
        {"mean_wait_intervals", agg.at("mean_wait_intervals").get<double>()},
        {"n_completed", agg.at("n_completed").get<int>()},
        {"n_migrations", agg.at("n_migrations").get<int>()},
        {"total_cost", agg.at("total_cost").get<double>()},
        {"mean_scheduling_time",
         m.at("timing").at("mean_scheduling_time").get<double>()},
    };
    table.json["runs"].push_back(row);

    char buf[640];
    std::snprintf(buf, sizeof buf,
                  "%s,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g\n",
                  row["scheduler"].get<std::string>().c_str(),
                  static_cast<unsigned long long>(seed_of(m)), obj, obj - first_obj,
                  row["mean_aec"].get<double>(), row["mean_art"].get<double>(),
                  row["total_energy_kwh"].get<double>(), row["mean_response"].get<double>(),
                  row["slo_violation_fraction"].get<double>(), row["fairness"].get<double>(),
                  row["mean_wait_intervals"].get<double>(), row["n_completed"].get<int>(),
                  row["n_migrations"].get<int>(), row["total_cost"].get<double>(),
                  row["mean_scheduling_time"].get<double>());
    csv += buf;
  }
  table.csv = std::move(csv);
  return table;
}

}  // namespace fogsim::harness

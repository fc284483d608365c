#include "fogsim/harness/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "fogsim/harness/dataset.hpp"
#include "fogsim/harness/model_io.hpp"
#include "fogsim/hash.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/schedulers/ga.hpp"
#include "fogsim/schedulers/gobi.hpp"
#include "fogsim/schedulers/gobi_star.hpp"
#include "fogsim/schedulers/lr_mmt.hpp"
#include "fogsim/schedulers/mad_mc.hpp"
#include "fogsim/schedulers/random.hpp"
#include "fogsim/simulator.hpp"

namespace fogsim::harness {
namespace {

constexpr std::uint64_t kModelInitSeedSalt = 0x6d6f64656cULL;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a64(ss.str()));
}

GobiModel scorer_or_fresh(const ExperimentConfig& cfg, int n_hosts, int extra_slots) {
  if (!cfg.scheduler.model_path.empty()) {
    ScorerBundle b = load_scorer(cfg.scheduler.model_path);
    if (b.meta.contains("n_hosts") && b.meta.at("n_hosts").get<int>() != n_hosts)
      throw std::runtime_error("scorer was trained for a different host count");
    return std::move(b.model);
  }
  // No pretrained scorer given: seeded random initialization, identity
  // scaling. Useful for overhead measurements and smoke runs.
  Rng rng(splitmix64(cfg.seed ^ kModelInitSeedSalt));
  GobiModel m;
  m.net = nn::make_scorer(encoding_dim(n_hosts, extra_slots), rng);
  return m;
}

GobiOptions gobi_options(const ExperimentConfig& cfg) {
  GobiOptions o;
  o.alpha = cfg.alpha;
  o.beta = cfg.beta;
  o.descent = cfg.scheduler.descent;
  o.online_lr = cfg.scheduler.online_lr;
  o.online_weight_decay = cfg.scheduler.online_weight_decay;
  o.seed = splitmix64(cfg.seed ^ kSchedulerSeedSalt);
  return o;
}

nlohmann::json aggregates_json(const Aggregates& a) {
  return {{"intervals", a.intervals},
          {"mean_aec", a.mean_aec},
          {"mean_art", a.mean_art},
          {"mean_objective", a.mean_objective},
          {"total_energy_kwh", a.total_energy_kwh},
          {"total_cost", a.total_cost},
          {"n_completed", a.n_completed},
          {"n_started", a.n_started},
          {"n_migrations", a.n_migrations},
          {"total_slo_violations", a.total_slo_violations},
          {"slo_violation_fraction", a.slo_violation_fraction},
          {"mean_response", a.mean_response},
          {"fairness", a.fairness},
          {"mean_migration_time", a.mean_migration_time},
          {"mean_wait_intervals", a.mean_wait_intervals}};
}

void append_csv_row(std::string& out, const QoSRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                "%d,%d,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                r.interval, r.aec, r.art, r.energy_kwh, r.slo_violation_fraction, r.fairness,
                r.avg_migration_time, r.avg_wait_intervals, r.cost, r.n_active, r.n_waiting,
                r.n_completed, r.n_slo_violations, r.n_migrations, r.n_started, r.sum_response,
                r.sum_response_sq, r.sum_migration_time, r.sum_wait_intervals, r.scheduling_time);
  out += buf;
}

RunResult run_core(const ExperimentConfig& cfg, bool write_outputs) {
  cfg.validate();
  const auto hosts = cfg.make_hosts();
  TraceCatalog catalog = make_catalog(cfg);
  SimState state = SimState::make(hosts, cfg.delta, cfg.seed);
  WorkloadGenerator gen(cfg.workload, std::move(catalog), cfg.delta,
                        splitmix64(cfg.seed ^ kWorkloadSeedSalt));
  auto sched = make_scheduler(cfg);

  std::ofstream csv;
  std::string csv_path;
  const char* kHeader =
      "interval,aec,art,energy_kwh,slo_violation_fraction,fairness,"
      "avg_migration_time,avg_wait_intervals,cost,n_active,n_waiting,n_completed,"
      "n_slo_violations,n_migrations,n_started,sum_response,sum_response_sq,"
      "sum_migration_time,sum_wait_intervals,scheduling_time\n";
  if (write_outputs) {
    std::filesystem::create_directories(cfg.out_dir);
    csv_path = (std::filesystem::path(cfg.out_dir) / "qos.csv").string();
    csv.open(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << kHeader;
  }

  double total_sched = 0.0, max_sched = 0.0;
  const auto wall_start = std::chrono::steady_clock::now();
  for (int t = 0; t < cfg.intervals; ++t) {
    stage_arrivals(state, gen.arrivals(t));
    const auto t0 = std::chrono::steady_clock::now();
    const Decision d = sched->schedule(state);
    const double sched_time = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    step(state, d, {});
    state.history.back().scheduling_time = sched_time;
    const QoSRecord& rec = state.history.back();
    sched->observe(state, rec);

    total_sched += sched_time;
    max_sched = std::max(max_sched, sched_time);
    if (write_outputs) {
      std::string line;
      append_csv_row(line, rec);
      csv << line;
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  RunResult res;
  res.rows = state.history;
  res.agg = aggregate(res.rows, cfg.alpha, cfg.beta);
  res.tasks = task_records(state);

  nlohmann::json tasks_json = nlohmann::json::array();
  for (const auto& tr : res.tasks)
    tasks_json.push_back({{"id", tr.id},
                          {"app_class", tr.app_class},
                          {"created_at", tr.created_at},
                          {"finished_at", tr.finished_at},
                          {"response", tr.response},
                          {"sla_deadline", tr.sla_deadline},
                          {"wait_intervals", tr.wait_intervals}});

  nlohmann::json model_hashes = nlohmann::json::object();
  for (const std::string& p :
       {cfg.scheduler.model_path, cfg.scheduler.star_model_path, cfg.scheduler.lstm_path})
    if (!p.empty()) model_hashes[p] = file_hash_hex(p);

  res.manifest = {{"format", "fogsim-run-v1"},
                  {"config", cfg.semantic_json()},
                  {"config_hash", hex64(cfg.config_hash())},
                  {"seed", cfg.seed},
                  {"scheduler", std::string(sched->name())},
                  {"model_hashes", model_hashes},
                  {"aggregates", aggregates_json(res.agg)},
                  {"tasks", tasks_json},
                  {"outputs", {{"qos_csv", write_outputs ? "qos.csv" : ""}}},
                  {"timing",
                   {{"mean_scheduling_time", cfg.intervals > 0 ? total_sched / cfg.intervals : 0.0},
                    {"max_scheduling_time", max_sched},
                    {"total_scheduling_time", total_sched},
                    {"total_wall_time", wall}}}};

  if (write_outputs) {
    csv.close();
    res.qos_csv_path = csv_path;
    res.result_json_path = (std::filesystem::path(cfg.out_dir) / "result.json").string();
    std::ofstream out(res.result_json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + res.result_json_path);
    out << res.manifest.dump(2) << "\n";
  }
  return res;
}

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& cfg) {
  const int n_hosts = static_cast<int>(cfg.make_hosts().size());
  const std::uint64_t sseed = splitmix64(cfg.seed ^ kSchedulerSeedSalt);
  const auto& s = cfg.scheduler;

  if (s.name == "random") return std::make_unique<RandomScheduler>(sseed);
  if (s.name == "lr_mmt") return std::make_unique<LrMmtScheduler>();
  if (s.name == "mad_mc") return std::make_unique<MadMcScheduler>();
  if (s.name == "ga")
    return std::make_unique<GaScheduler>(scorer_or_fresh(cfg, n_hosts, 0), s.ga, sseed);
  if (s.name == "gobi")
    return std::make_unique<GobiScheduler>(scorer_or_fresh(cfg, n_hosts, 0), gobi_options(cfg));
  if (s.name == "gobi_star") {
    if (s.model_path.empty() || s.star_model_path.empty() || s.lstm_path.empty())
      throw std::runtime_error(
          "gobi_star needs model_path, star_model_path and lstm_path in the config");
    ScorerBundle frozen = load_scorer(s.model_path);
    ScorerBundle star = load_scorer(s.star_model_path);
    if (star.meta.contains("extra_slots") && star.meta.at("extra_slots").get<int>() != 1)
      throw std::runtime_error("star scorer must be trained with one extra slot");
    LstmBundle lstm = load_lstm(s.lstm_path);
    GobiStarOptions opts;
    opts.base = gobi_options(cfg);
    opts.class_means = std::move(lstm.class_means);
    return std::make_unique<GobiStarScheduler>(std::move(frozen.model), std::move(star.model),
                                               std::move(lstm.lstm), std::move(opts));
  }
  throw std::runtime_error("unknown scheduler: " + s.name);
}

RunResult run_experiment(const ExperimentConfig& cfg) { return run_core(cfg, true); }

RunResult run_in_memory(const ExperimentConfig& cfg) { return run_core(cfg, false); }

std::map<std::string, double> calibrate_slo(const ExperimentConfig& cfg) {
  const RunResult res = run_in_memory(cfg);
  std::map<std::string, std::vector<double>> by_class;
  for (const auto& tr : res.tasks) by_class[tr.app_class].push_back(tr.response);

  std::map<std::string, double> psi;
  for (auto& [cls, responses] : by_class)
    psi[cls] = percentile_nearest_rank(responses, 0.95);

  const TraceCatalog catalog = make_catalog(cfg);
  for (const auto& cls : catalog.classes)
    if (!psi.count(cls.name))
      std::cerr << "warning: class " << cls.name
                << " had no completed tasks; omitted from deadline table\n";
  return psi;
}

void write_psi_table(const std::string& path, const std::map<std::string, double>& psi,
                     const std::string& reference_scheduler) {
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [cls, v] : psi) table[cls] = v;
  nlohmann::json j = {{"format", "fogsim-psi-v1"},
                      {"reference_scheduler", reference_scheduler},
                      {"psi", table}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

std::map<std::string, double> load_psi_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open deadline table: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed deadline table " + path + ": " + e.what());
  }
  if (j.value("format", std::string{}) != "fogsim-psi-v1")
    throw std::runtime_error("not a deadline table: " + path);
  std::map<std::string, double> psi;
  for (const auto& [cls, v] : j.at("psi").items()) psi[cls] = v.get<double>();
  return psi;
}

}  // namespace fogsim::harness

#include "fogsim/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fogsim/harness/model_io.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/schedulers/gobi_star.hpp"
#include "fogsim/schedulers/random.hpp"
#include "fogsim/simulator.hpp"

namespace fogsim::harness {
namespace {


nlohmann::json meta_to_json(const DatasetMeta& m) {
  return {
      {"format", "fogsim-dataset-v1"},
      {"kind", m.kind},
      {"n_hosts", m.n_hosts},
      {"extra_slots", m.extra_slots},
      {"dim", m.dim},
      {"delta", m.delta},
      {"seed", m.seed},
      {"alpha", m.alpha},
      {"beta", m.beta},
  };
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_traces_sidecar(const std::string& path, const SimState& state,
                          const TraceCatalog& catalog) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace sidecar for writing: " + path);

  std::vector<const TaskState*> tasks;
  for (const auto& t : state.finished) tasks.push_back(&t);
  for (const auto& t : state.active) tasks.push_back(&t);
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskState* a, const TaskState* b) { return a->spec.id < b->spec.id; });

  nlohmann::json head = {{"format", "fogsim-traces-v1"},
                         {"classes", nlohmann::json::array()}};
  for (const auto& cls : catalog.classes) head["classes"].push_back(cls.name);
  out << head.dump() << "\n";

  for (const TaskState* t : tasks) {
    if (t->util_history.empty()) continue;
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : t->util_history)
      series.push_back({s.ips, s.ram, s.disk_bw, s.net_bw});
    nlohmann::json row = {{"task_id", t->spec.id},
                          {"app_class", t->spec.app_class},
                          {"series", series}};
    out << row.dump() << "\n";
  }
}

struct GenContext {
  std::vector<Host> hosts;
  TraceCatalog catalog;
  SimState state;
  WorkloadGenerator gen;
  RandomScheduler executor;
};

GenContext make_context(const ExperimentConfig& cfg) {
  cfg.validate();
  auto hosts = cfg.make_hosts();
  TraceCatalog catalog = make_catalog(cfg);
  SimState state = SimState::make(hosts, cfg.delta, cfg.seed);
  WorkloadGenerator gen(cfg.workload, catalog, cfg.delta,
                        splitmix64(cfg.seed ^ kWorkloadSeedSalt));
  RandomScheduler executor(splitmix64(cfg.seed ^ kSchedulerSeedSalt));
  return GenContext{std::move(hosts), std::move(catalog), std::move(state), std::move(gen),
                    std::move(executor)};
}

}  // namespace

TraceCatalog make_catalog(const ExperimentConfig& cfg) {
  if (cfg.workload.trace_source == "file") return load_traces(cfg.workload.trace_file);
  return synthetic_catalog(splitmix64(cfg.seed ^ kCatalogSeedSalt));
}

std::string traces_sidecar_path(const std::string& dataset_path) {
  return dataset_path + ".traces.jsonl";
}

Vector dbar_block_from_hosts(const std::vector<int>& dbar_hosts, int n_hosts) {
  const int rows = n_hosts * n_hosts;
  Vector block = Vector::Zero(static_cast<Eigen::Index>(rows) * n_hosts);
  for (std::size_t r = 0; r < dbar_hosts.size(); ++r) {
    const int h = dbar_hosts[r];
    if (h >= 0 && h < n_hosts && static_cast<int>(r) < rows)
      block[static_cast<Eigen::Index>(r) * n_hosts + h] = 1.0;
  }
  return block;
}

void generate_dataset(const ExperimentConfig& cfg, int n_intervals, const std::string& out_path) {
  if (n_intervals < 0) throw std::invalid_argument("n_intervals must be non-negative");
  GenContext ctx = make_context(cfg);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset for writing: " + out_path);

  DatasetMeta meta;
  meta.kind = "f";
  meta.n_hosts = static_cast<int>(ctx.hosts.size());
  meta.extra_slots = 0;
  meta.dim = encoding_dim(meta.n_hosts, 0);
  meta.delta = cfg.delta;
  meta.seed = cfg.seed;
  meta.alpha = cfg.alpha;
  meta.beta = cfg.beta;
  out << meta_to_json(meta).dump() << "\n";

  for (int t = 0; t < n_intervals; ++t) {
    stage_arrivals(ctx.state, ctx.gen.arrivals(t));
    const Decision d = ctx.executor.schedule(ctx.state);
    const FeatureEncoding enc = encode(ctx.state, d, nullptr, 0);
    const QoSRecord rec = step(ctx.state, d, {});
    const double y = objective(rec, cfg.alpha, cfg.beta);
    nlohmann::json row = {{"x", to_std(enc.x)}, {"y", y}};
    out << row.dump() << "\n";
  }

  write_traces_sidecar(traces_sidecar_path(out_path), ctx.state, ctx.catalog);
}

void generate_dataset_star(const ExperimentConfig& cfg, int n_intervals,
                           const std::string& scorer_path, const std::string& lstm_path,
                           const std::string& out_path) {
  if (n_intervals < 0) throw std::invalid_argument("n_intervals must be non-negative");
  GenContext ctx = make_context(cfg);

  const ScorerBundle scorer = load_scorer(scorer_path);
  const LstmBundle predictor = load_lstm(lstm_path);
  if (scorer.meta.contains("n_hosts") &&
      scorer.meta.at("n_hosts").get<int>() != static_cast<int>(ctx.hosts.size()))
    throw std::runtime_error("scorer was trained for a different host count");

  GobiOptions gopts;
  gopts.alpha = cfg.alpha;
  gopts.beta = cfg.beta;
  gopts.descent = cfg.scheduler.descent;
  gopts.seed = splitmix64(cfg.seed ^ kCandidateSeedSalt);
  // Candidate generator only; it never observes outcomes, so its scorer
  // stays frozen throughout.
  GobiScheduler candidate_gen(scorer.model, gopts);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset for writing: " + out_path);

  DatasetMeta meta;
  meta.kind = "f*";
  meta.n_hosts = static_cast<int>(ctx.hosts.size());
  meta.extra_slots = 1;
  meta.dim = encoding_dim(meta.n_hosts, 1);
  meta.delta = cfg.delta;
  meta.seed = cfg.seed;
  meta.alpha = cfg.alpha;
  meta.beta = cfg.beta;
  out << meta_to_json(meta).dump() << "\n";

  for (int t = 0; t < n_intervals; ++t) {
    stage_arrivals(ctx.state, ctx.gen.arrivals(t));

    const Decision candidate = candidate_gen.schedule(ctx.state);
    const DemandMap preds = predict_demands(ctx.state, predictor.lstm, predictor.class_means);
    const QoSRecord ahead = lookahead(ctx.state, candidate, {}, preds);
    const double price = objective(ahead, cfg.alpha, cfg.beta);

    const Decision d = ctx.executor.schedule(ctx.state);
    FeatureEncoding enc = encode(ctx.state, d, nullptr, 1);
    enc.set_extra(0, price);

    std::vector<int> dbar_hosts(enc.row_task_ids.size(), -1);
    for (std::size_t r = 0; r < enc.row_task_ids.size(); ++r)
      if (const auto h = candidate.host_for(enc.row_task_ids[r])) dbar_hosts[r] = *h;

    const QoSRecord rec = step(ctx.state, d, {});
    const double y = objective(rec, cfg.alpha, cfg.beta);
    nlohmann::json row = {{"x", to_std(enc.x)},
                          {"y", y},
                          {"dbar_hosts", dbar_hosts},
                          {"lookahead_obj", price}};
    out << row.dump() << "\n";
  }

  write_traces_sidecar(traces_sidecar_path(out_path), ctx.state, ctx.catalog);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset is empty: " + path);

  nlohmann::json head;
  try {
    head = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed dataset header in " + path + ": " + e.what());
  }
  if (head.value("format", std::string{}) != "fogsim-dataset-v1")
    throw std::runtime_error("not a dataset file: " + path);

  Dataset ds;
  ds.meta.kind = head.at("kind").get<std::string>();
  ds.meta.n_hosts = head.at("n_hosts").get<int>();
  ds.meta.extra_slots = head.at("extra_slots").get<int>();
  ds.meta.dim = head.at("dim").get<int>();
  ds.meta.delta = head.at("delta").get<double>();
  ds.meta.seed = head.at("seed").get<std::uint64_t>();
  ds.meta.alpha = head.at("alpha").get<double>();
  ds.meta.beta = head.at("beta").get<double>();

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    TrainingRow row;
    const auto xs = j.at("x").get<std::vector<double>>();
    if (static_cast<int>(xs.size()) != ds.meta.dim)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": row dimension does not match header");
    row.x = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    row.y = j.at("y").get<double>();
    if (j.contains("dbar_hosts")) row.dbar_hosts = j.at("dbar_hosts").get<std::vector<int>>();
    if (j.contains("lookahead_obj")) row.lookahead_obj = j.at("lookahead_obj").get<double>();
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

}  // namespace fogsim::harness

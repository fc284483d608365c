#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fogsim/harness/compare.hpp"
#include "fogsim/harness/config.hpp"
#include "fogsim/harness/dataset.hpp"
#include "fogsim/harness/metrics.hpp"
#include "fogsim/harness/model_io.hpp"
#include "fogsim/harness/run.hpp"
#include "fogsim/harness/train.hpp"
#include "fogsim/nn/serialize.hpp"
#include "fogsim/schedulers/gobi_star.hpp"
#include "fogsim/schedulers/random.hpp"
#include "fogsim/simulator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace fogsim;
using namespace fogsim::harness;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  const fs::path p = fs::temp_directory_path() / "fogsim_harness_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Host plain_host(int id) {
  Host h;
  h.id = id;
  h.ips_capacity = 4000.0;
  h.ram_capacity = 8000.0;
  h.ram_bw = 400.0;
  h.disk_bw = 100.0;
  h.net_bw = 1000.0;
  h.latency = 0.003;
  h.power_curve = {70, 72, 74, 76, 78, 80, 82, 84, 86, 88, 90};
  h.cost_rate = 0.05;
  return h;
}

// Small three-host experiment so encoder dimensions stay tiny.
ExperimentConfig small_config(std::uint64_t seed = 11) {
  ExperimentConfig cfg;
  cfg.hosts = "custom";
  cfg.custom_hosts = {plain_host(0), plain_host(1), plain_host(2)};
  cfg.intervals = 8;
  cfg.seed = seed;
  cfg.workload.lambda = 1.0;
  return cfg;
}

QoSRecord row(int interval, double aec, double art, int completed, double sum_resp,
              double sum_resp_sq) {
  QoSRecord r;
  r.interval = interval;
  r.aec = aec;
  r.art = art;
  r.n_completed = completed;
  r.sum_response = sum_resp;
  r.sum_response_sq = sum_resp_sq;
  return r;
}

}  // namespace

TEST_CASE("experiment config") {
  SUBCASE("defaults validate") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.make_hosts().size() == 10);
    cfg.hosts = "h50";
    CHECK(cfg.make_hosts().size() == 50);
  }

  SUBCASE("rejects bad values") {
    ExperimentConfig cfg;
    cfg.hosts = "h9000";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.hosts = "custom";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // no host list
    cfg = {};
    cfg.intervals = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.delta = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.alpha = 0.6;  // alpha + beta != 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.scheduler.name = "oracle";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  SUBCASE("hash ignores artifact locations") {
    ExperimentConfig a = small_config();
    ExperimentConfig b = a;
    b.out_dir = "/somewhere/else";
    b.scheduler.model_path = "model.json";
    CHECK(a.config_hash() == b.config_hash());

    b = a;
    b.seed = a.seed + 1;
    CHECK(a.config_hash() != b.config_hash());
    b = a;
    b.workload.lambda = 2.0;
    CHECK(a.config_hash() != b.config_hash());
  }

  SUBCASE("json round trip preserves the hash") {
    ExperimentConfig a = small_config();
    a.scheduler.name = "ga";
    a.scheduler.ga.population = 17;
    a.workload.app_mix = {0.8, 0.1, 0.1};
    const ExperimentConfig b = ExperimentConfig::from_json(a.semantic_json());
    CHECK(a.config_hash() == b.config_hash());
    CHECK(b.scheduler.ga.population == 17);
    CHECK(b.custom_hosts.size() == 3);
  }

  SUBCASE("load from file") {
    const fs::path p = work_dir() / "cfg.json";
    {
      std::ofstream out(p);
      out << R"({"intervals": 4, "seed": 99, "out_dir": "elsewhere",
                 "scheduler": {"name": "lr_mmt"}})";
    }
    const ExperimentConfig cfg = ExperimentConfig::load(p.string());
    CHECK(cfg.intervals == 4);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_dir == "elsewhere");
    CHECK(cfg.scheduler.name == "lr_mmt");
    CHECK_THROWS_AS(ExperimentConfig::load("/no/such/config.json"), std::runtime_error);
    fs::remove(p);
  }
}

TEST_CASE("fairness index") {
  CHECK(jain_index({1.0, 3.0}) == doctest::Approx(0.8));
  CHECK(jain_index({5.0, 5.0, 5.0}) == doctest::Approx(1.0));
  CHECK(jain_index({}) == 1.0);
  CHECK(jain_index({0.0, 0.0}) == 1.0);
  // n values with one non-zero -> 1/n
  CHECK(jain_index({4.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.25));
}

TEST_CASE("slo violation fraction") {
  std::vector<TaskRecord> recs;
  for (int i = 0; i < 10; ++i) {
    TaskRecord r;
    r.app_class = "compute";
    r.response = i < 3 ? 1200.0 : 400.0;  // three slow completions
    recs.push_back(r);
  }
  std::map<std::string, double> psi{{"compute", 600.0}};
  CHECK(compute_slo_violations(recs, psi) == doctest::Approx(0.3));
  CHECK(compute_slo_violations({}, psi) == 0.0);

  recs[0].app_class = "mystery";
  CHECK_THROWS_AS(compute_slo_violations(recs, psi), std::invalid_argument);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v{10, 1, 9, 2, 8, 3, 7, 4, 6, 5};
  CHECK(percentile_nearest_rank(v, 0.95) == 10.0);
  CHECK(percentile_nearest_rank(v, 0.5) == 5.0);
  CHECK(percentile_nearest_rank(v, 1.0) == 10.0);
  CHECK(percentile_nearest_rank(v, 0.05) == 1.0);
  CHECK(percentile_nearest_rank({42.0}, 0.95) == 42.0);
  CHECK_THROWS_AS(percentile_nearest_rank({}, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(percentile_nearest_rank(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile_nearest_rank(v, 1.5), std::invalid_argument);
}

TEST_CASE("aggregates recompute from rows") {
  std::vector<QoSRecord> rows;
  QoSRecord a = row(0, 0.4, 0.2, 2, 900.0, 450000.0);
  a.energy_kwh = 1.5;
  a.cost = 0.2;
  a.n_started = 3;
  a.n_migrations = 1;
  a.sum_migration_time = 2.0;
  a.n_slo_violations = 1;
  a.sum_wait_intervals = 4.0;
  QoSRecord b = row(1, 0.6, 0.8, 6, 3000.0, 1600000.0);
  b.energy_kwh = 2.5;
  b.cost = 0.3;
  b.n_started = 5;
  rows = {a, b};

  const Aggregates agg = aggregate(rows, 0.5, 0.5);
  CHECK(agg.intervals == 2);
  CHECK(agg.mean_aec == doctest::Approx(0.5));
  CHECK(agg.mean_art == doctest::Approx((0.2 * 2 + 0.8 * 6) / 8.0));
  CHECK(agg.mean_objective == doctest::Approx(0.5 * (0.3 + 0.7)));
  CHECK(agg.total_energy_kwh == doctest::Approx(4.0));
  CHECK(agg.total_cost == doctest::Approx(0.5));
  CHECK(agg.n_completed == 8);
  CHECK(agg.n_started == 8);
  CHECK(agg.n_migrations == 1);
  CHECK(agg.mean_migration_time == doctest::Approx(2.0));
  CHECK(agg.total_slo_violations == 1);
  CHECK(agg.slo_violation_fraction == doctest::Approx(1.0 / 8.0));
  CHECK(agg.mean_response == doctest::Approx(3900.0 / 8.0));
  CHECK(agg.mean_wait_intervals == doctest::Approx(4.0 / 8.0));
  const double fair = 3900.0 * 3900.0 / (8.0 * 2050000.0);
  CHECK(agg.fairness == doctest::Approx(fair));

  const Aggregates none = aggregate({}, 0.5, 0.5);
  CHECK(none.intervals == 0);
  CHECK(none.fairness == 1.0);
}

TEST_CASE("task records carry completion facts") {
  SimState st = SimState::make({plain_host(0)}, 300.0, 1);
  TaskState done;
  done.spec.id = 4;
  done.spec.app_class = "compute";
  done.spec.created_at = 2;
  done.spec.sla_deadline = 1000.0;
  done.spec.total_instructions = 1.0;
  done.spec.trace = {{1, 1, 1, 1}};
  done.finished_at = 5;
  done.wait_intervals = 1;
  st.finished.push_back(done);

  const auto recs = task_records(st);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].id == 4);
  CHECK(recs[0].response == doctest::Approx((5 - 2 + 1) * 300.0));
  CHECK(recs[0].sla_deadline == 1000.0);
  CHECK(recs[0].wait_intervals == 1);
}

TEST_CASE("dataset generation") {
  const fs::path dir = work_dir();

  SUBCASE("shape and determinism") {
    const ExperimentConfig cfg = small_config(21);
    const fs::path p1 = dir / "ds_a.jsonl";
    const fs::path p2 = dir / "ds_b.jsonl";
    generate_dataset(cfg, 12, p1.string());
    generate_dataset(cfg, 12, p2.string());
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(traces_sidecar_path(p1.string())) == slurp(traces_sidecar_path(p2.string())));

    const Dataset ds = load_dataset(p1.string());
    CHECK(ds.meta.kind == "f");
    CHECK(ds.meta.n_hosts == 3);
    CHECK(ds.meta.extra_slots == 0);
    CHECK(ds.meta.dim == encoding_dim(3, 0));
    CHECK(ds.meta.seed == 21);
    REQUIRE(ds.rows.size() == 12);
    for (const auto& r : ds.rows) {
      CHECK(r.x.size() == ds.meta.dim);
      CHECK(r.y >= 0.0);
      CHECK(r.y <= 1.0);
      CHECK(r.dbar_hosts.empty());
    }

    const auto seqs = load_trace_sequences(traces_sidecar_path(p1.string()));
    CHECK(!seqs.empty());
    for (const auto& [cls, series] : seqs) {
      CHECK(!cls.empty());
      CHECK(!series.empty());
    }

    for (const fs::path& p : {p1, p2}) {
      fs::remove(traces_sidecar_path(p.string()));
      fs::remove(p);
    }
  }

  SUBCASE("zero intervals gives a header-only file") {
    const fs::path p = dir / "ds_empty.jsonl";
    generate_dataset(small_config(), 0, p.string());
    const Dataset ds = load_dataset(p.string());
    CHECK(ds.rows.empty());
    CHECK(ds.meta.dim == encoding_dim(3, 0));
    fs::remove(traces_sidecar_path(p.string()));
    fs::remove(p);
  }

  SUBCASE("loader rejects broken files") {
    CHECK_THROWS_AS(load_dataset((dir / "missing.jsonl").string()), std::runtime_error);

    const fs::path bad = dir / "bad.jsonl";
    {
      std::ofstream out(bad);
      out << "{\"format\":\"something-else\"}\n";
    }
    CHECK_THROWS_AS(load_dataset(bad.string()), std::runtime_error);

    {
      std::ofstream out(bad);
      out << R"({"format":"fogsim-dataset-v1","kind":"f","n_hosts":3,"extra_slots":0,)"
          << R"("dim":4,"delta":300.0,"seed":1,"alpha":0.5,"beta":0.5})" << "\n"
          << R"({"x":[1.0,2.0],"y":0.5})" << "\n";
    }
    try {
      load_dataset(bad.string());
      FAIL("expected a dimension error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    fs::remove(bad);
  }
}

TEST_CASE("candidate decision block expansion") {
  const Vector block = dbar_block_from_hosts({1, -1, 0}, 2);
  REQUIRE(block.size() == 2 * 2 * 2);  // M = n_hosts^2 rows
  CHECK(block[0] == 0.0);
  CHECK(block[1] == 1.0);   // row 0 on host 1
  CHECK(block[2] == 0.0);   // row 1 absent
  CHECK(block[3] == 0.0);
  CHECK(block[4] == 1.0);   // row 2 on host 0
  CHECK(block.sum() == 2.0);
}

TEST_CASE("model bundles round trip") {
  const fs::path dir = work_dir();
  Rng rng(3);

  SUBCASE("scorer") {
    ScorerBundle b;
    b.model.net = nn::make_scorer(42, rng);
    b.model.norm.lo = Vector::Zero(42);
    b.model.norm.hi = Vector::Constant(42, 2.0);
    b.meta = {{"kind", "f"}, {"n_hosts", 2}};
    b.training = {{"epochs", 5}};

    const fs::path p = dir / "scorer.json";
    save_scorer(p.string(), b);
    const ScorerBundle r = load_scorer(p.string());
    CHECK(nn::to_json(r.model.net) == nn::to_json(b.model.net));
    CHECK((r.model.norm.lo.array() == b.model.norm.lo.array()).all());
    CHECK((r.model.norm.hi.array() == b.model.norm.hi.array()).all());
    CHECK(r.meta.at("n_hosts") == 2);
    CHECK(r.training.at("epochs") == 5);
    fs::remove(p);
  }

  SUBCASE("predictor") {
    LstmBundle b;
    b.lstm = nn::LstmPredictor::make(8, rng);
    b.class_means["compute"] = Vec4(1, 2, 3, 4);
    b.class_means["mixed"] = Vec4(5, 6, 7, 8);

    const fs::path p = dir / "lstm.json";
    save_lstm(p.string(), b);
    const LstmBundle r = load_lstm(p.string());
    CHECK(nn::to_json(r.lstm) == nn::to_json(b.lstm));
    REQUIRE(r.class_means.size() == 2);
    CHECK(r.class_means.at("compute")[3] == 4.0);
    fs::remove(p);
  }

  SUBCASE("format guards") {
    const fs::path p = dir / "not_a_bundle.json";
    {
      std::ofstream out(p);
      out << "{\"format\":\"mystery\"}\n";
    }
    CHECK_THROWS_AS(load_scorer(p.string()), std::runtime_error);
    CHECK_THROWS_AS(load_lstm(p.string()), std::runtime_error);
    fs::remove(p);
  }
}

TEST_CASE("scorer training") {
  const fs::path dir = work_dir();
  const fs::path data = dir / "linear.jsonl";
  const int dim = encoding_dim(2, 0);
  REQUIRE(dim == 42);

  // y depends linearly on one state coordinate; everything else is noise
  {
    std::ofstream out(data);
    out << R"({"format":"fogsim-dataset-v1","kind":"f","n_hosts":2,"extra_slots":0,)"
        << R"("dim":42,"delta":300.0,"seed":5,"alpha":0.5,"beta":0.5})" << "\n";
    Rng rng(6);
    out.precision(17);
    for (int i = 0; i < 400; ++i) {
      out << "{\"x\":[";
      double target = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double v = k < 34 ? rng.uniform(0.0, 10.0) : rng.uniform();
        if (k == 3) target = 0.2 + 0.06 * v;
        out << (k ? "," : "") << v;
      }
      out << "],\"y\":" << target << "}\n";
    }
  }

  TrainProtocol proto;
  proto.lr = 2e-3;
  proto.max_epochs = 400;
  proto.batch = 64;
  proto.convergence_sum = 1e-4;

  const fs::path model1 = dir / "model1.json";
  const TrainReport rep = train_scorer(data.string(), model1.string(), proto);
  CHECK(rep.epochs > 0);
  CHECK(rep.test_loss < 2e-3);
  CHECK(rep.curve.size() == static_cast<std::size_t>(rep.epochs));
  CHECK(rep.curve.front() > rep.curve.back());

  const ScorerBundle bundle = load_scorer(model1.string());
  CHECK(bundle.meta.at("kind") == "f");
  CHECK(bundle.meta.at("n_hosts") == 2);
  CHECK(bundle.model.norm.lo.size() == 42);

  SUBCASE("training is deterministic") {
    const fs::path model2 = dir / "model2.json";
    train_scorer(data.string(), model2.string(), proto);
    CHECK(slurp(model1) == slurp(model2));
    fs::remove(model2);
  }

  SUBCASE("empty datasets are rejected") {
    const fs::path empty = dir / "empty.jsonl";
    {
      std::ofstream out(empty);
      out << R"({"format":"fogsim-dataset-v1","kind":"f","n_hosts":2,"extra_slots":0,)"
          << R"("dim":42,"delta":300.0,"seed":5,"alpha":0.5,"beta":0.5})" << "\n";
    }
    CHECK_THROWS_AS(train_scorer(empty.string(), (dir / "x.json").string(), proto),
                    std::runtime_error);
    fs::remove(empty);
  }

  fs::remove(model1);
  fs::remove(data);
}

TEST_CASE("predictor training") {
  const fs::path dir = work_dir();
  const fs::path traces = dir / "traces.jsonl";
  {
    std::ofstream out(traces);
    out << R"({"format":"fogsim-traces-v1","classes":["compute"]})" << "\n";
    // constant sequences are easy to fit and give exact class means
    for (int i = 0; i < 10; ++i) {
      out << R"({"task_id":)" << i << R"(,"app_class":"compute","series":[)";
      for (int s = 0; s < 5; ++s) out << (s ? "," : "") << "[100,50,10,5]";
      out << "]}\n";
    }
    // too short to train on, but still counted in the class mean
    out << R"({"task_id":99,"app_class":"compute","series":[[100,50,10,5]]})" << "\n";
  }

  TrainProtocol proto;
  proto.lstm_hidden = 8;
  proto.lstm_max_epochs = 30;
  proto.lstm_lr = 5e-3;

  const fs::path model = dir / "lstm_trained.json";
  const TrainReport rep = train_lstm(traces.string(), model.string(), proto);
  CHECK(rep.epochs > 0);

  const LstmBundle b = load_lstm(model.string());
  CHECK(b.class_means.at("compute")[0] == doctest::Approx(100.0));
  CHECK(b.class_means.at("compute")[3] == doctest::Approx(5.0));

  // after training on constants, the forecast should be in the ballpark
  std::vector<UtilizationSample> hist(4, UtilizationSample{100, 50, 10, 5});
  const UtilizationSample pred = nn::lstm_predict(b.lstm, hist);
  CHECK(pred.ips == doctest::Approx(100.0).epsilon(0.35));

  SUBCASE("needs at least one trainable sequence") {
    const fs::path sparse = dir / "sparse.jsonl";
    {
      std::ofstream out(sparse);
      out << R"({"format":"fogsim-traces-v1","classes":["compute"]})" << "\n";
      out << R"({"task_id":0,"app_class":"compute","series":[[1,1,1,1]]})" << "\n";
    }
    CHECK_THROWS_AS(train_lstm(sparse.string(), (dir / "x.json").string(), proto),
                    std::runtime_error);
    fs::remove(sparse);
  }

  fs::remove(model);
  fs::remove(traces);
}

TEST_CASE("price-slot dataset replays from its seeds") {
  const fs::path dir = work_dir();
  ExperimentConfig cfg = small_config(31);

  // hand-made bundles: a random scorer and an untrained predictor
  Rng rng(8);
  ScorerBundle scorer;
  scorer.model.net = nn::make_scorer(encoding_dim(3, 0), rng);
  scorer.meta = {{"kind", "f"}, {"n_hosts", 3}, {"extra_slots", 0}};
  const fs::path spath = dir / "star_scorer.json";
  save_scorer(spath.string(), scorer);

  LstmBundle predictor;
  predictor.lstm = nn::LstmPredictor::make(8, rng);
  predictor.class_means["compute"] = Vec4(1500, 400, 3, 6);
  const fs::path lpath = dir / "star_lstm.json";
  save_lstm(lpath.string(), predictor);

  const fs::path dpath = dir / "star.jsonl";
  const int n = 15;
  generate_dataset_star(cfg, n, spath.string(), lpath.string(), dpath.string());
  const Dataset ds = load_dataset(dpath.string());
  CHECK(ds.meta.kind == "f*");
  CHECK(ds.meta.extra_slots == 1);
  CHECK(ds.meta.dim == encoding_dim(3, 1));
  REQUIRE(ds.rows.size() == n);

  // replay the generator's documented seeding and compare every column
  const auto hosts = cfg.make_hosts();
  TraceCatalog catalog = make_catalog(cfg);
  SimState state = SimState::make(hosts, cfg.delta, cfg.seed);
  WorkloadGenerator gen(cfg.workload, catalog, cfg.delta,
                        splitmix64(cfg.seed ^ kWorkloadSeedSalt));
  RandomScheduler executor(splitmix64(cfg.seed ^ kSchedulerSeedSalt));
  GobiOptions gopts;
  gopts.alpha = cfg.alpha;
  gopts.beta = cfg.beta;
  gopts.descent = cfg.scheduler.descent;
  gopts.seed = splitmix64(cfg.seed ^ kCandidateSeedSalt);
  GobiScheduler candidate_gen(load_scorer(spath.string()).model, gopts);
  const LstmBundle lb = load_lstm(lpath.string());

  for (int t = 0; t < n; ++t) {
    stage_arrivals(state, gen.arrivals(t));
    const Decision candidate = candidate_gen.schedule(state);
    const DemandMap preds = predict_demands(state, lb.lstm, lb.class_means);
    const double price = objective(lookahead(state, candidate, {}, preds), cfg.alpha, cfg.beta);

    const Decision d = executor.schedule(state);
    FeatureEncoding enc = encode(state, d, nullptr, 1);
    enc.set_extra(0, price);

    const TrainingRow& row = ds.rows[static_cast<std::size_t>(t)];
    CHECK(row.lookahead_obj == price);
    CHECK(row.x[enc.extra_offset()] == price);
    CHECK((row.x.array() == enc.x.array()).all());

    REQUIRE(row.dbar_hosts.size() == enc.row_task_ids.size());
    for (std::size_t r = 0; r < enc.row_task_ids.size(); ++r) {
      const auto h = candidate.host_for(enc.row_task_ids[r]);
      CHECK(row.dbar_hosts[r] == (h ? *h : -1));
    }

    const QoSRecord rec = step(state, d, {});
    CHECK(row.y == objective(rec, cfg.alpha, cfg.beta));
  }

  SUBCASE("host-count mismatch is refused") {
    ExperimentConfig wider = cfg;
    wider.custom_hosts.push_back(plain_host(3));
    CHECK_THROWS_AS(
        generate_dataset_star(wider, 2, spath.string(), lpath.string(), dpath.string()),
        std::runtime_error);
  }

  fs::remove(traces_sidecar_path(dpath.string()));
  fs::remove(dpath);
  fs::remove(spath);
  fs::remove(lpath);
}

TEST_CASE("running experiments") {
  SUBCASE("in memory") {
    const ExperimentConfig cfg = small_config(41);
    const RunResult res = run_in_memory(cfg);
    REQUIRE(res.rows.size() == 8);
    CHECK(res.qos_csv_path.empty());
    CHECK(res.manifest.at("format") == "fogsim-run-v1");
    CHECK(res.manifest.at("scheduler") == "random");
    CHECK(res.manifest.at("outputs").at("qos_csv") == "");
    CHECK(res.manifest.contains("timing"));

    const Aggregates again = aggregate(res.rows, cfg.alpha, cfg.beta);
    CHECK(res.agg.mean_aec == doctest::Approx(again.mean_aec).epsilon(1e-12));
    CHECK(res.agg.n_completed == again.n_completed);
    CHECK(res.agg.fairness == doctest::Approx(again.fairness).epsilon(1e-12));
    for (const auto& r : res.rows) {
      CHECK(r.aec >= 0.0);
      CHECK(r.aec <= 1.0);
      CHECK(r.art >= 0.0);
      CHECK(r.art <= 1.0);
    }
  }

  SUBCASE("every scheduler family runs") {
    for (const char* name : {"random", "lr_mmt", "mad_mc", "ga", "gobi"}) {
      ExperimentConfig cfg = small_config(42);
      cfg.intervals = 3;
      cfg.scheduler.name = name;
      cfg.scheduler.ga.population = 8;
      cfg.scheduler.ga.generations = 4;
      INFO("scheduler " << name);
      const RunResult res = run_in_memory(cfg);
      CHECK(res.rows.size() == 3);
      CHECK(res.manifest.at("scheduler") == name);
    }
    ExperimentConfig cfg = small_config(42);
    cfg.scheduler.name = "gobi_star";  // needs model files
    CHECK_THROWS_AS(run_in_memory(cfg), std::runtime_error);
  }

  SUBCASE("artifacts are reproducible modulo timing") {
    const fs::path dir = work_dir();
    ExperimentConfig cfg = small_config(43);
    cfg.out_dir = (dir / "run_a").string();
    const RunResult a = run_experiment(cfg);
    cfg.out_dir = (dir / "run_b").string();
    const RunResult b = run_experiment(cfg);
    REQUIRE(fs::exists(a.qos_csv_path));
    REQUIRE(fs::exists(b.result_json_path));

    // the CSV is identical once the trailing scheduling-time column goes
    std::istringstream ca(slurp(a.qos_csv_path)), cb(slurp(b.qos_csv_path));
    std::string la, lb;
    int lines = 0;
    while (std::getline(ca, la) && std::getline(cb, lb)) {
      CHECK(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
      ++lines;
    }
    CHECK(lines == cfg.intervals + 1);
    CHECK(!std::getline(cb, lb));  // same line count

    nlohmann::json ja = nlohmann::json::parse(slurp(a.result_json_path));
    nlohmann::json jb = nlohmann::json::parse(slurp(b.result_json_path));
    CHECK(ja.at("config_hash") == jb.at("config_hash"));
    ja.erase("timing");
    jb.erase("timing");
    ja.at("config").erase("out_dir");  // only the locations differ
    jb.at("config").erase("out_dir");
    CHECK(ja == jb);

    SUBCASE("comparison table") {
      const CompareTable table =
          compare_runs({a.result_json_path, b.result_json_path});
      CHECK(table.json.at("format") == "fogsim-compare-v1");
      REQUIRE(table.json.at("runs").size() == 2);
      const auto& r0 = table.json.at("runs").at(0);
      const auto& r1 = table.json.at("runs").at(1);
      CHECK(r0.at("aggregates").at("mean_aec") == r1.at("aggregates").at("mean_aec"));
      // header plus one line per run
      CHECK(std::count(table.csv.begin(), table.csv.end(), '\n') == 3);
      CHECK_THROWS_AS(compare_runs({a.result_json_path}), std::invalid_argument);
      CHECK_THROWS_AS(compare_runs({a.result_json_path, "/no/such.json"}),
                      std::runtime_error);
    }

    fs::remove_all(dir / "run_a");
    fs::remove_all(dir / "run_b");
  }
}

TEST_CASE("deadline calibration") {
  ExperimentConfig cfg = small_config(51);
  cfg.intervals = 60;
  cfg.workload.lambda = 1.5;

  const RunResult res = run_in_memory(cfg);
  std::map<std::string, std::vector<double>> by_class;
  for (const auto& tr : res.tasks) by_class[tr.app_class].push_back(tr.response);
  REQUIRE(!by_class.empty());

  const auto psi = calibrate_slo(cfg);
  CHECK(psi.size() == by_class.size());
  for (const auto& [cls, responses] : by_class)
    CHECK(psi.at(cls) == percentile_nearest_rank(responses, 0.95));

  SUBCASE("table io") {
    const fs::path p = work_dir() / "psi.json";
    write_psi_table(p.string(), psi, "random");
    const auto loaded = load_psi_table(p.string());
    CHECK(loaded == psi);

    {
      std::ofstream out(p);
      out << "{\"format\":\"other\"}\n";
    }
    CHECK_THROWS_AS(load_psi_table(p.string()), std::runtime_error);
    CHECK_THROWS_AS(load_psi_table("/no/such/psi.json"), std::runtime_error);
    fs::remove(p);
  }
}

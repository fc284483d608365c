// Command-line front end: dataset generation, training, experiment runs,
// comparisons and SLO calibration. Errors leave as one-line JSON on stderr
// with a nonzero exit code.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fogsim/harness/compare.hpp"
#include "fogsim/harness/config.hpp"
#include "fogsim/harness/dataset.hpp"
#include "fogsim/harness/run.hpp"
#include "fogsim/harness/train.hpp"

namespace hn = fogsim::harness;

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  std::string scheduler;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* cmd, bool with_scheduler = true) {
    cmd->add_option("--config", config, "experiment config file (JSON)");
    cmd->add_option("--out", out, "output path");
    seed_opt = cmd->add_option("--seed", seed, "override the config's seed");
    if (with_scheduler)
      cmd->add_option("--scheduler", scheduler,
                      "override the config's scheduler "
                      "(random|lr_mmt|mad_mc|ga|gobi|gobi_star)");
  }

  // Precedence for the run output directory: --out, then FOGSIM_OUT, then
  // the config file. The env var deliberately affects nothing else.
  hn::ExperimentConfig load(bool out_is_dir) const {
    hn::ExperimentConfig cfg =
        config.empty() ? hn::ExperimentConfig{} : hn::ExperimentConfig::load(config);
    if (out_is_dir) {
      if (const char* env = std::getenv("FOGSIM_OUT"); env && *env) cfg.out_dir = env;
      if (!out.empty()) cfg.out_dir = out;
    }
    if (seed_opt && seed_opt->count() > 0) cfg.seed = seed;
    if (!scheduler.empty()) cfg.scheduler.name = scheduler;
    cfg.validate();
    return cfg;
  }
};

std::string detect_traces_path(const std::string& data) {
  std::ifstream in(data, std::ios::binary);
  if (in) {
    std::string first;
    std::getline(in, first);
    try {
      const auto head = nlohmann::json::parse(first);
      if (head.value("format", std::string{}) == "fogsim-dataset-v1")
        return hn::traces_sidecar_path(data);  // caller gave the dataset; use its sidecar
    } catch (const nlohmann::json::exception&) {
    }
  }
  return data;
}

int run_command(const std::string& name, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    hn::emit_error_json(e.what(), {{"command", name}});
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trace-driven fog/edge scheduling simulator"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data",
                                 "simulate under the random scheduler and write a "
                                 "training dataset plus utilization traces");
  CommonOpts gen_opts;
  gen_opts.attach(gen, false);
  int gen_intervals = 2000;
  gen->add_option("--intervals", gen_intervals, "simulated intervals (= rows)");

  // gen-data-star
  auto* gens = app.add_subcommand("gen-data-star",
                                  "like gen-data, but each row also carries the frozen "
                                  "scorer's candidate decision and its lookahead price");
  CommonOpts gens_opts;
  gens_opts.attach(gens, false);
  int gens_intervals = 2000;
  std::string gens_model, gens_lstm;
  gens->add_option("--intervals", gens_intervals, "simulated intervals (= rows)");
  gens->add_option("--model", gens_model, "pretrained scorer bundle")->required();
  gens->add_option("--lstm", gens_lstm, "trained demand predictor bundle")->required();

  // train
  auto* train = app.add_subcommand("train", "train a scorer or the demand predictor");
  std::string train_kind, train_data, train_out = "model.json";
  std::uint64_t train_seed = 7;
  hn::TrainProtocol proto;
  train->add_option("--kind", train_kind, "f | fstar | lstm")->required();
  train->add_option("--data", train_data, "dataset (f, fstar) or traces file (lstm)")
      ->required();
  train->add_option("--out", train_out, "model bundle to write");
  train->add_option("--seed", train_seed, "training shuffle/init seed");
  train->add_option("--max-epochs", proto.max_epochs, "epoch cap for scorer training");
  train->add_option("--lstm-max-epochs", proto.lstm_max_epochs, "epoch cap for lstm training");
  train->add_option("--batch", proto.batch, "minibatch size");
  train->add_option("--lr", proto.lr, "learning rate");

  // run
  auto* run = app.add_subcommand("run", "run one experiment and persist QoS rows + manifest");
  CommonOpts run_opts;
  run_opts.attach(run);
  int run_intervals = -1;
  run->add_option("--intervals", run_intervals, "override the config's interval count");

  // compare
  auto* cmp = app.add_subcommand("compare", "join >= 2 run manifests into one table");
  std::vector<std::string> cmp_runs;
  std::string cmp_out;
  cmp->add_option("--run", cmp_runs, "result.json of a finished run (repeatable)")
      ->required()
      ->expected(-1);
  cmp->add_option("--out", cmp_out, "prefix for <prefix>.csv and <prefix>.json");

  // calibrate-slo
  auto* cal = app.add_subcommand("calibrate-slo",
                                 "run a reference scheduler and write per-class "
                                 "95th-percentile response deadlines");
  CommonOpts cal_opts;
  cal_opts.attach(cal);
  std::string cal_psi;
  cal->add_option("--psi-out", cal_psi, "deadline table file (default <out_dir>/psi.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    hn::emit_error_json(std::string("argument error: ") + e.what());
    return 2;
  }

  if (gen->parsed()) {
    return run_command("gen-data", [&] {
      const auto cfg = gen_opts.load(false);
      const std::string out = gen_opts.out.empty() ? "dataset.jsonl" : gen_opts.out;
      hn::generate_dataset(cfg, gen_intervals, out);
      std::cout << nlohmann::json{{"dataset", out},
                                  {"traces", hn::traces_sidecar_path(out)},
                                  {"rows", gen_intervals}}
                       .dump()
                << "\n";
    });
  }
  if (gens->parsed()) {
    return run_command("gen-data-star", [&] {
      const auto cfg = gens_opts.load(false);
      const std::string out = gens_opts.out.empty() ? "dataset_star.jsonl" : gens_opts.out;
      hn::generate_dataset_star(cfg, gens_intervals, gens_model, gens_lstm, out);
      std::cout << nlohmann::json{{"dataset", out},
                                  {"traces", hn::traces_sidecar_path(out)},
                                  {"rows", gens_intervals}}
                       .dump()
                << "\n";
    });
  }
  if (train->parsed()) {
    return run_command("train", [&] {
      proto.seed = train_seed;
      hn::TrainReport report;
      if (train_kind == "lstm") {
        report = hn::train_lstm(detect_traces_path(train_data), train_out, proto);
      } else if (train_kind == "f" || train_kind == "fstar") {
        const auto ds = hn::load_dataset(train_data);
        const std::string want = train_kind == "f" ? "f" : "f*";
        if (ds.meta.kind != want)
          throw std::runtime_error("dataset kind is '" + ds.meta.kind + "' but --kind asked for '" +
                                   want + "'");
        report = hn::train_scorer(train_data, train_out, proto);
      } else {
        throw std::runtime_error("unknown --kind: " + train_kind + " (want f, fstar or lstm)");
      }
      std::cout << nlohmann::json{{"model", train_out},
                                  {"epochs", report.epochs},
                                  {"final_train_loss", report.final_train_loss},
                                  {"test_loss", report.test_loss}}
                       .dump()
                << "\n";
    });
  }
  if (run->parsed()) {
    return run_command("run", [&] {
      auto cfg = run_opts.load(true);
      if (run_intervals > 0) cfg.intervals = run_intervals;
      const hn::RunResult res = hn::run_experiment(cfg);
      nlohmann::json summary = {{"qos_csv", res.qos_csv_path},
                                {"result_json", res.result_json_path},
                                {"aggregates", res.manifest.at("aggregates")}};
      std::cout << summary.dump() << "\n";
    });
  }
  if (cmp->parsed()) {
    return run_command("compare", [&] {
      const hn::CompareTable table = hn::compare_runs(cmp_runs);
      if (cmp_out.empty()) {
        std::cout << table.csv;
      } else {
        std::ofstream csv(cmp_out + ".csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open for writing: " + cmp_out + ".csv");
        csv << table.csv;
        std::ofstream js(cmp_out + ".json", std::ios::binary);
        if (!js) throw std::runtime_error("cannot open for writing: " + cmp_out + ".json");
        js << table.json.dump(2) << "\n";
        std::cout << nlohmann::json{{"csv", cmp_out + ".csv"}, {"json", cmp_out + ".json"}}.dump()
                  << "\n";
      }
    });
  }
  if (cal->parsed()) {
    return run_command("calibrate-slo", [&] {
      auto cfg = cal_opts.load(true);
      // The reference scheduler for deadline calibration defaults to the
      // evolutionary baseline unless overridden on the command line.
      if (cal_opts.scheduler.empty()) cfg.scheduler.name = "ga";
      cfg.validate();
      const auto psi = hn::calibrate_slo(cfg);
      std::string out = cal_psi;
      if (out.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        out = (std::filesystem::path(cfg.out_dir) / "psi.json").string();
      }
      hn::write_psi_table(out, psi, cfg.scheduler.name);
      nlohmann::json table = nlohmann::json::object();
      for (const auto& [cls, v] : psi) table[cls] = v;
      std::cout << nlohmann::json{{"psi_table", out}, {"psi", table}}.dump() << "\n";
    });
  }
  return 0;
}

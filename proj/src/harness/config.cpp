#include "fogsim/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "fogsim/hash.hpp"

namespace fogsim::harness {
namespace {

Host make_model(const std::string& model, HostLayer layer) {
  Host h;
  h.model = model;
  h.layer = layer;
  h.latency = layer == HostLayer::edge ? 0.003 : 0.076;
  if (model == "B2s") {
    h.ips_capacity = 4029.0;
    h.ram_capacity = 4295.0;
    h.ram_bw = 372.0;
    h.disk_bw = 13.4;
    h.net_bw = 1000.0;
    h.cost_rate = 0.0472;
    h.power_curve = {75.2, 78.2, 84.1, 89.6, 94.9, 100.0, 105.0, 109.0, 112.0, 115.0, 117.0};
  } else if (model == "B4ms") {
    h.ips_capacity = 8102.0;
    h.ram_capacity = 17180.0;
    h.ram_bw = 360.0;
    h.disk_bw = 10.3;
    h.net_bw = 1000.0;
    h.cost_rate = layer == HostLayer::edge ? 0.189 : 0.166;
    h.power_curve = {71.0, 77.9, 83.4, 89.2, 95.6, 102.0, 108.0, 114.0, 119.0, 123.0, 126.0};
  } else if (model == "B8ms") {
    h.ips_capacity = 2000.0;
    h.ram_capacity = 34360.0;
    h.ram_bw = 376.0;
    h.disk_bw = 11.64;
    h.net_bw = 2500.0;
    h.cost_rate = 0.333;
    h.power_curve = {68.7, 78.3, 84.0, 88.4, 92.5, 97.3, 104.0, 111.0, 121.0, 131.0, 137.0};
  } else {
    throw std::invalid_argument("unknown host model: " + model);
  }
  return h;
}

std::vector<Host> build_fleet(int scale) {
  // Per unit of scale: 4x B2s edge, 2x B4ms edge, 2x B4ms cloud, 2x B8ms cloud.
  std::vector<Host> out;
  const auto add = [&](const std::string& model, HostLayer layer, int count) {
    for (int i = 0; i < count * scale; ++i) {
      Host h = make_model(model, layer);
      h.id = static_cast<int>(out.size());
      out.push_back(std::move(h));
    }
  };
  add("B2s", HostLayer::edge, 4);
  add("B4ms", HostLayer::edge, 2);
  add("B4ms", HostLayer::cloud, 2);
  add("B8ms", HostLayer::cloud, 2);
  return out;
}

nlohmann::json host_to_json(const Host& h) {
  return {
      {"id", h.id},
      {"ips_capacity", h.ips_capacity},
      {"ram_capacity", h.ram_capacity},
      {"ram_bw", h.ram_bw},
      {"disk_bw", h.disk_bw},
      {"net_bw", h.net_bw},
      {"latency", h.latency},
      {"power_curve", h.power_curve},
      {"cost_rate", h.cost_rate},
      {"layer", h.layer == HostLayer::edge ? "edge" : "cloud"},
      {"model", h.model},
  };
}

Host host_from_json(const nlohmann::json& j) {
  Host h;
  h.id = j.at("id").get<int>();
  h.ips_capacity = j.at("ips_capacity").get<double>();
  h.ram_capacity = j.at("ram_capacity").get<double>();
  h.ram_bw = j.at("ram_bw").get<double>();
  h.disk_bw = j.at("disk_bw").get<double>();
  h.net_bw = j.at("net_bw").get<double>();
  h.latency = j.at("latency").get<double>();
  const auto curve = j.at("power_curve").get<std::vector<double>>();
  if (curve.size() != h.power_curve.size())
    throw std::invalid_argument("power_curve must have 11 entries");
  std::copy(curve.begin(), curve.end(), h.power_curve.begin());
  h.cost_rate = j.at("cost_rate").get<double>();
  const auto layer = j.at("layer").get<std::string>();
  if (layer == "edge") {
    h.layer = HostLayer::edge;
  } else if (layer == "cloud") {
    h.layer = HostLayer::cloud;
  } else {
    throw std::invalid_argument("host layer must be edge or cloud: " + layer);
  }
  h.model = j.value("model", std::string{});
  return h;
}

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::vector<Host> host_catalog(const std::string& preset) {
  if (preset == "h10") return build_fleet(1);
  if (preset == "h50") return build_fleet(5);
  throw std::invalid_argument("unknown host preset: " + preset);
}

void ExperimentConfig::validate() const {
  if (hosts != "h10" && hosts != "h50" && hosts != "custom")
    throw std::invalid_argument("hosts must be h10, h50 or custom");
  if (hosts == "custom" && custom_hosts.empty())
    throw std::invalid_argument("custom host list is empty");
  for (const auto& h : custom_hosts) h.validate();
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  if (intervals <= 0) throw std::invalid_argument("intervals must be positive");
  if (alpha < 0.0 || beta < 0.0 || std::abs(alpha + beta - 1.0) > 1e-9)
    throw std::invalid_argument("alpha and beta must be non-negative and sum to 1");
  static const std::vector<std::string> names = {"random", "lr_mmt", "mad_mc",
                                                 "ga",     "gobi",   "gobi_star"};
  if (std::find(names.begin(), names.end(), scheduler.name) == names.end())
    throw std::invalid_argument("unknown scheduler: " + scheduler.name);
  scheduler.ga.validate();
  if (scheduler.online_lr < 0.0) throw std::invalid_argument("online_lr must be non-negative");
  // Synthetic catalogs expose three classes; file catalogs exactly one.
  const std::size_t n_classes = workload.trace_source == "synthetic" ? 3 : 1;
  workload.validate(n_classes);
}

std::vector<Host> ExperimentConfig::make_hosts() const {
  if (hosts == "custom") return custom_hosts;
  return host_catalog(hosts);
}

nlohmann::json ExperimentConfig::semantic_json() const {
  nlohmann::json sched = {
      {"name", scheduler.name},
      {"descent",
       {{"lr", scheduler.descent.lr},
        {"epsilon", scheduler.descent.epsilon},
        {"max_iters", scheduler.descent.max_iters}}},
      {"online_lr", scheduler.online_lr},
      {"online_weight_decay", scheduler.online_weight_decay},
      {"ga",
       {{"population", scheduler.ga.population},
        {"generations", scheduler.ga.generations},
        {"mutation_rate", scheduler.ga.mutation_rate},
        {"crossover_rate", scheduler.ga.crossover_rate},
        {"elitism", scheduler.ga.elitism}}},
  };
  nlohmann::json wl = {
      {"lambda", workload.lambda},
      {"app_mix", workload.app_mix},
      {"trace_source", workload.trace_source},
  };
  nlohmann::json j = {
      {"hosts", hosts},          {"delta", delta}, {"intervals", intervals},
      {"alpha", alpha},          {"beta", beta},   {"seed", seed},
      {"scheduler", sched},      {"workload", wl},
  };
  if (hosts == "custom") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : custom_hosts) arr.push_back(host_to_json(h));
    j["custom_hosts"] = arr;
  }
  return j;
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(semantic_json().dump()); }

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  maybe(j, "hosts", cfg.hosts);
  if (j.contains("custom_hosts"))
    for (const auto& hj : j.at("custom_hosts")) cfg.custom_hosts.push_back(host_from_json(hj));
  maybe(j, "delta", cfg.delta);
  maybe(j, "intervals", cfg.intervals);
  maybe(j, "alpha", cfg.alpha);
  maybe(j, "beta", cfg.beta);
  maybe(j, "seed", cfg.seed);
  maybe(j, "out_dir", cfg.out_dir);
  if (j.contains("scheduler")) {
    const auto& s = j.at("scheduler");
    maybe(s, "name", cfg.scheduler.name);
    maybe(s, "model_path", cfg.scheduler.model_path);
    maybe(s, "star_model_path", cfg.scheduler.star_model_path);
    maybe(s, "lstm_path", cfg.scheduler.lstm_path);
    maybe(s, "online_lr", cfg.scheduler.online_lr);
    maybe(s, "online_weight_decay", cfg.scheduler.online_weight_decay);
    if (s.contains("descent")) {
      const auto& d = s.at("descent");
      maybe(d, "lr", cfg.scheduler.descent.lr);
      maybe(d, "epsilon", cfg.scheduler.descent.epsilon);
      maybe(d, "max_iters", cfg.scheduler.descent.max_iters);
    }
    if (s.contains("ga")) {
      const auto& g = s.at("ga");
      maybe(g, "population", cfg.scheduler.ga.population);
      maybe(g, "generations", cfg.scheduler.ga.generations);
      maybe(g, "mutation_rate", cfg.scheduler.ga.mutation_rate);
      maybe(g, "crossover_rate", cfg.scheduler.ga.crossover_rate);
      maybe(g, "elitism", cfg.scheduler.ga.elitism);
    }
  }
  if (j.contains("workload")) {
    const auto& w = j.at("workload");
    maybe(w, "lambda", cfg.workload.lambda);
    maybe(w, "app_mix", cfg.workload.app_mix);
    maybe(w, "trace_source", cfg.workload.trace_source);
    maybe(w, "trace_file", cfg.workload.trace_file);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed config " + path + ": " + e.what());
  }
  return from_json(j);
}

void emit_error_json(const std::string& message, const nlohmann::json& context) {
  nlohmann::json j = context;
  j["error"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace fogsim::harness

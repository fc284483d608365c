#include "fogsim/workload.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fogsim {

void TraceClass::validate() const {
  if (series.empty()) throw std::invalid_argument("trace class has no series: " + name);
  for (const auto& s : series) {
    if (s.empty()) throw std::invalid_argument("empty series in class " + name);
    for (const auto& u : s)
      if (u.ips < 0 || u.ram < 0 || u.disk_bw < 0 || u.net_bw < 0)
        throw std::invalid_argument("negative demand in class " + name);
  }
  if (budget_lo <= 0 || budget_hi < budget_lo || deadline_factor <= 0)
    throw std::invalid_argument("bad budget/deadline parameters in class " + name);
}

const TraceClass& TraceCatalog::by_name(const std::string& name) const {
  for (const auto& c : classes)
    if (c.name == name) return c;
  throw std::invalid_argument("unknown app class: " + name);
}

void TraceCatalog::validate() const {
  if (classes.empty()) throw std::invalid_argument("catalog has no classes");
  for (const auto& c : classes) c.validate();
}

std::map<std::string, Vec4> TraceCatalog::class_means() const {
  std::map<std::string, Vec4> means;
  for (const auto& c : classes) {
    Vec4 sum = Vec4::Zero();
    long n = 0;
    for (const auto& s : c.series)
      for (const auto& u : s) {
        sum += u.vec();
        ++n;
      }
    means[c.name] = n > 0 ? Vec4(sum / static_cast<double>(n)) : Vec4::Zero();
  }
  return means;
}

void WorkloadConfig::validate(std::size_t n_classes) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("workload: lambda must be > 0");
  if (app_mix.empty()) {
    if (trace_source != "synthetic" && trace_source != "file")
      throw std::invalid_argument("workload: trace_source must be synthetic or file");
    return;  // empty mix means uniform over the catalog's classes
  }
  if (app_mix.size() != n_classes)
    throw std::invalid_argument("workload: app_mix size must match catalog classes");
  double sum = 0.0;
  for (double p : app_mix) {
    if (p < 0.0) throw std::invalid_argument("workload: negative mix probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("workload: app_mix must sum to 1");
  if (trace_source != "synthetic" && trace_source != "file")
    throw std::invalid_argument("workload: trace_source must be synthetic or file");
}

TraceCatalog load_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("trace file is empty: " + path);
  if (line == "series_id,interval,ips,ram_mb,disk_bw,net_bw\r")
    line.pop_back();
  if (line != "series_id,interval,ips,ram_mb,disk_bw,net_bw")
    throw std::runtime_error("unexpected trace header in " + path + ": " + line);

  TraceClass cls;
  cls.name = "trace";
  std::vector<std::string> order;  // series ids in order of appearance
  std::map<std::string, std::vector<UtilizationSample>> series;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, field;
    UtilizationSample u;
    double fields[5];
    if (!std::getline(ss, id, ','))
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": missing series_id");
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": too few columns");
      try {
        fields[i] = std::stod(field);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad number '" + field + "'");
      }
    }
    u.ips = fields[1];
    u.ram = fields[2];
    u.disk_bw = fields[3];
    u.net_bw = fields[4];
    if (series.find(id) == series.end()) order.push_back(id);
    series[id].push_back(u);
  }
  if (order.empty()) throw std::runtime_error("trace file has no data rows: " + path);
  for (const auto& id : order) cls.series.push_back(series[id]);
  TraceCatalog catalog;
  catalog.classes.push_back(std::move(cls));
  catalog.validate();
  return catalog;
}

namespace {

std::vector<UtilizationSample> synth_series(Rng& rng, double ips_lo, double ips_hi,
                                            double ram_lo, double ram_hi,
                                            double disk_lo, double disk_hi,
                                            double net_lo, double net_hi) {
  const int len = 10 + static_cast<int>(rng.bounded(21));  // 10..30 samples
  const double ips_base = rng.uniform(ips_lo, ips_hi);
  const double ram_base = rng.uniform(ram_lo, ram_hi);
  const double disk_base = rng.uniform(disk_lo, disk_hi);
  const double net_base = rng.uniform(net_lo, net_hi);
  const double period = rng.uniform(6.0, 16.0);
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  std::vector<UtilizationSample> s;
  s.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) {
    const double wave = 1.0 + 0.3 * std::sin(2.0 * M_PI * i / period + phase);
    const double noise = 1.0 + 0.05 * rng.gaussian();
    UtilizationSample u;
    u.ips = std::max(0.0, ips_base * wave * noise);
    u.ram = std::max(0.0, ram_base * (1.0 + 0.1 * rng.gaussian()));
    u.disk_bw = std::max(0.0, disk_base * wave);
    u.net_bw = std::max(0.0, net_base * wave);
    s.push_back(u);
  }
  return s;
}

}  // namespace

TraceCatalog synthetic_catalog(std::uint64_t seed, int series_per_class) {
  Rng rng(seed);
  TraceCatalog catalog;

  TraceClass compute;
  compute.name = "compute";
  compute.budget_lo = 8.0;
  compute.budget_hi = 22.0;
  compute.deadline_factor = 26.0;
  for (int i = 0; i < series_per_class; ++i)
    compute.series.push_back(synth_series(rng, 1200, 2600, 200, 700, 1, 5, 2, 10));

  TraceClass bandwidth;
  bandwidth.name = "bandwidth";
  bandwidth.budget_lo = 5.0;
  bandwidth.budget_hi = 14.0;
  bandwidth.deadline_factor = 16.0;
  for (int i = 0; i < series_per_class; ++i)
    bandwidth.series.push_back(synth_series(rng, 300, 900, 300, 900, 5, 15, 40, 150));

  TraceClass mixed;
  mixed.name = "mixed";
  mixed.budget_lo = 6.0;
  mixed.budget_hi = 18.0;
  mixed.deadline_factor = 20.0;
  for (int i = 0; i < series_per_class; ++i)
    mixed.series.push_back(synth_series(rng, 800, 1800, 250, 800, 3, 10, 15, 60));

  catalog.classes = {std::move(compute), std::move(bandwidth), std::move(mixed)};
  catalog.validate();
  return catalog;
}

WorkloadGenerator::WorkloadGenerator(WorkloadConfig cfg, TraceCatalog catalog,
                                     double delta, std::uint64_t seed)
    : cfg_(std::move(cfg)), catalog_(std::move(catalog)), delta_(delta), rng_(seed) {
  catalog_.validate();
  cfg_.validate(catalog_.classes.size());
  if (!(delta_ > 0.0)) throw std::invalid_argument("workload: delta must be > 0");
  if (cfg_.app_mix.empty())
    cfg_.app_mix.assign(catalog_.classes.size(), 1.0 / catalog_.classes.size());
}

std::vector<TaskSpec> WorkloadGenerator::arrivals(int t) {
  std::vector<TaskSpec> specs;
  const int n = rng_.poisson(cfg_.lambda);
  for (int i = 0; i < n; ++i) {
    // Class by inverse CDF over the mix, then a uniform series pick.
    const double roll = rng_.uniform();
    std::size_t ci = 0;
    double acc = 0.0;
    for (; ci + 1 < cfg_.app_mix.size(); ++ci) {
      acc += cfg_.app_mix[ci];
      if (roll < acc) break;
    }
    const TraceClass& cls = catalog_.classes[ci];
    const auto si = static_cast<std::size_t>(
        rng_.bounded(static_cast<std::uint64_t>(cls.series.size())));

    TaskSpec spec;
    spec.id = next_id_++;
    spec.created_at = t;
    spec.app_class = cls.name;
    spec.trace = cls.series[si];
    double mean_ips = 0.0;
    for (const auto& u : spec.trace) mean_ips += u.ips;
    mean_ips /= static_cast<double>(spec.trace.size());
    const double factor = rng_.uniform(cls.budget_lo, cls.budget_hi);
    spec.total_instructions = std::max(1.0, factor * mean_ips * delta_);
    spec.sla_deadline = cls.deadline_factor * delta_;
    spec.validate();
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace fogsim

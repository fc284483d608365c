#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fogsim/workload.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

using namespace fogsim;

namespace {

constexpr double kDelta = 300.0;

TraceCatalog toy_catalog() {
  TraceClass a;
  a.name = "alpha";
  a.series = {{{1, 2, 3, 4}}, {{3, 6, 9, 12}, {5, 2, 1, 0}}};
  a.budget_lo = 2.0;
  a.budget_hi = 4.0;
  a.deadline_factor = 10.0;

  TraceClass b;
  b.name = "beta";
  b.series = {{{100, 50, 5, 5}}};

  TraceCatalog cat;
  cat.classes = {a, b};
  return cat;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("workload config validation") {
  WorkloadConfig cfg;
  CHECK_NOTHROW(cfg.validate(3));

  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(3), std::invalid_argument);

  cfg = {};
  cfg.app_mix = {0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(3), std::invalid_argument);  // size mismatch

  cfg.app_mix = {0.5, 0.6, -0.1};
  CHECK_THROWS_AS(cfg.validate(3), std::invalid_argument);  // negative entry

  cfg.app_mix = {0.5, 0.4, 0.2};
  CHECK_THROWS_AS(cfg.validate(3), std::invalid_argument);  // does not sum to 1

  cfg = {};
  cfg.trace_source = "carrier_pigeon";
  CHECK_THROWS_AS(cfg.validate(3), std::invalid_argument);
}

TEST_CASE("catalog validation and means") {
  TraceCatalog cat = toy_catalog();
  CHECK_NOTHROW(cat.validate());
  CHECK_THROWS_AS(TraceCatalog{}.validate(), std::invalid_argument);

  TraceCatalog empty_series = cat;
  empty_series.classes[0].series.clear();
  CHECK_THROWS_AS(empty_series.validate(), std::invalid_argument);

  TraceCatalog negative = cat;
  negative.classes[0].series[0][0].ips = -1.0;
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

  CHECK_THROWS_AS(cat.by_name("gamma"), std::invalid_argument);
  CHECK(cat.by_name("beta").series.size() == 1);

  const auto means = cat.class_means();
  REQUIRE(means.size() == 2);
  // alpha averages three samples: (1,2,3,4), (3,6,9,12), (5,2,1,0)
  CHECK(means.at("alpha")[0] == doctest::Approx(3.0));
  CHECK(means.at("alpha")[1] == doctest::Approx(10.0 / 3.0));
  CHECK(means.at("alpha")[2] == doctest::Approx(13.0 / 3.0));
  CHECK(means.at("alpha")[3] == doctest::Approx(16.0 / 3.0));
  CHECK(means.at("beta")[0] == doctest::Approx(100.0));
}

TEST_CASE("synthetic catalog shape") {
  const TraceCatalog cat = synthetic_catalog(9);
  REQUIRE(cat.classes.size() == 3);
  CHECK(cat.classes[0].name == "compute");
  CHECK(cat.classes[1].name == "bandwidth");
  CHECK(cat.classes[2].name == "mixed");

  long total_samples = 0;
  for (const auto& cls : cat.classes) {
    CHECK(cls.series.size() == 64);
    for (const auto& s : cls.series) {
      CHECK(s.size() >= 10);
      CHECK(s.size() <= 30);
      for (const auto& u : s) {
        CHECK(u.ips >= 0.0);
        CHECK(u.ram >= 0.0);
        CHECK(u.disk_bw >= 0.0);
        CHECK(u.net_bw >= 0.0);
      }
      total_samples += static_cast<long>(s.size());
    }
  }

  // compute-heavy pools actually demand more compute than bandwidth pools
  const auto means = cat.class_means();
  CHECK(means.at("compute")[0] > means.at("bandwidth")[0]);
  CHECK(means.at("bandwidth")[3] > means.at("compute")[3]);

  SUBCASE("seeded determinism") {
    const TraceCatalog again = synthetic_catalog(9);
    long again_samples = 0;
    for (const auto& cls : again.classes)
      for (const auto& s : cls.series) again_samples += static_cast<long>(s.size());
    CHECK(again_samples == total_samples);
    CHECK(again.classes[0].series[0][0].ips == cat.classes[0].series[0][0].ips);
    CHECK(synthetic_catalog(10).classes[0].series[0][0].ips !=
          cat.classes[0].series[0][0].ips);
  }

  SUBCASE("series count is configurable") {
    CHECK(synthetic_catalog(9, 4).classes[0].series.size() == 4);
  }
}

TEST_CASE("arrival statistics") {
  SUBCASE("poisson rate") {
    WorkloadConfig cfg;
    cfg.lambda = 1.2;
    WorkloadGenerator gen(cfg, synthetic_catalog(1, 8), kDelta, 17);
    long total = 0;
    const int intervals = 4000;
    for (int t = 0; t < intervals; ++t) total += static_cast<long>(gen.arrivals(t).size());
    const double mean = static_cast<double>(total) / intervals;
    CHECK(mean > 1.1);
    CHECK(mean < 1.3);
  }

  SUBCASE("class mix proportions") {
    WorkloadConfig cfg;
    cfg.lambda = 2.0;
    cfg.app_mix = {0.8, 0.1, 0.1};
    WorkloadGenerator gen(cfg, synthetic_catalog(2, 8), kDelta, 18);
    std::map<std::string, long> counts;
    long total = 0;
    for (int t = 0; t < 3000; ++t)
      for (const auto& spec : gen.arrivals(t)) {
        counts[spec.app_class]++;
        ++total;
      }
    REQUIRE(total > 4000);
    CHECK(static_cast<double>(counts["compute"]) / total == doctest::Approx(0.8).epsilon(0.025));
    CHECK(static_cast<double>(counts["bandwidth"]) / total == doctest::Approx(0.1).epsilon(0.25));
    CHECK(static_cast<double>(counts["mixed"]) / total == doctest::Approx(0.1).epsilon(0.25));
  }

  SUBCASE("an empty mix falls back to uniform") {
    WorkloadConfig cfg;
    cfg.lambda = 2.0;
    cfg.app_mix.clear();
    WorkloadGenerator gen(cfg, synthetic_catalog(3, 8), kDelta, 19);
    std::map<std::string, long> counts;
    long total = 0;
    for (int t = 0; t < 3000; ++t)
      for (const auto& spec : gen.arrivals(t)) {
        counts[spec.app_class]++;
        ++total;
      }
    for (const auto& [cls, n] : counts)
      CHECK(static_cast<double>(n) / total == doctest::Approx(1.0 / 3).epsilon(0.1));
  }
}

TEST_CASE("generated specs") {
  WorkloadConfig cfg;
  cfg.lambda = 1.5;
  const TraceCatalog cat = synthetic_catalog(4, 8);
  WorkloadGenerator gen(cfg, cat, kDelta, 23);

  int expected_id = 0;
  for (int t = 0; t < 200; ++t) {
    for (const auto& spec : gen.arrivals(t)) {
      CHECK(spec.id == expected_id++);
      CHECK(spec.created_at == t);
      CHECK_NOTHROW(spec.validate());

      const TraceClass& cls = cat.by_name(spec.app_class);
      CHECK(spec.sla_deadline == cls.deadline_factor * kDelta);

      double mean_ips = 0.0;
      for (const auto& u : spec.trace) mean_ips += u.ips;
      mean_ips /= static_cast<double>(spec.trace.size());
      const double factor = spec.total_instructions / (mean_ips * kDelta);
      CHECK(factor >= cls.budget_lo - 1e-9);
      CHECK(factor <= cls.budget_hi + 1e-9);
    }
  }
  CHECK(expected_id > 100);

  SUBCASE("same seed, same stream") {
    WorkloadGenerator a(cfg, cat, kDelta, 99);
    WorkloadGenerator b(cfg, cat, kDelta, 99);
    for (int t = 0; t < 50; ++t) {
      const auto sa = a.arrivals(t);
      const auto sb = b.arrivals(t);
      REQUIRE(sa.size() == sb.size());
      for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].id == sb[i].id);
        CHECK(sa[i].app_class == sb[i].app_class);
        CHECK(sa[i].total_instructions == sb[i].total_instructions);
      }
    }
  }

  SUBCASE("tiny traces floor the budget at one instruction") {
    TraceClass dust;
    dust.name = "dust";
    dust.series = {{{1e-9, 1, 1, 1}}};
    TraceCatalog tiny;
    tiny.classes = {dust};
    WorkloadConfig wc;
    wc.lambda = 5.0;
    WorkloadGenerator g(wc, tiny, kDelta, 7);
    bool saw_task = false;
    for (int t = 0; t < 20 && !saw_task; ++t)
      for (const auto& spec : g.arrivals(t)) {
        CHECK(spec.total_instructions == 1.0);
        saw_task = true;
      }
    CHECK(saw_task);
  }
}

TEST_CASE("trace files") {
  const auto path = temp_file("fogsim_traces_test.csv");

  SUBCASE("round trip") {
    {
      std::ofstream out(path);
      out << "series_id,interval,ips,ram_mb,disk_bw,net_bw\n"
          << "a,0,1000,256,2,4\n"
          << "a,1,1100,260,2.5,4.5\n"
          << "b,0,50,64,1,1\n";
    }
    const TraceCatalog cat = load_traces(path.string());
    REQUIRE(cat.classes.size() == 1);
    CHECK(cat.classes[0].name == "trace");
    REQUIRE(cat.classes[0].series.size() == 2);
    REQUIRE(cat.classes[0].series[0].size() == 2);  // first-appearance order
    CHECK(cat.classes[0].series[0][1].ips == doctest::Approx(1100.0));
    CHECK(cat.classes[0].series[0][1].ram == doctest::Approx(260.0));
    CHECK(cat.classes[0].series[1][0].ips == doctest::Approx(50.0));
    std::filesystem::remove(path);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_traces("/nonexistent/fogsim.csv"), std::runtime_error);
  }

  SUBCASE("wrong header") {
    {
      std::ofstream out(path);
      out << "id,ips\n";
    }
    CHECK_THROWS_AS(load_traces(path.string()), std::runtime_error);
    std::filesystem::remove(path);
  }

  SUBCASE("bad rows report their line number") {
    {
      std::ofstream out(path);
      out << "series_id,interval,ips,ram_mb,disk_bw,net_bw\n"
          << "a,0,1000,256,2,4\n"
          << "a,1,not_a_number,256,2,4\n";
    }
    try {
      load_traces(path.string());
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    std::filesystem::remove(path);
  }

  SUBCASE("short rows are rejected") {
    {
      std::ofstream out(path);
      out << "series_id,interval,ips,ram_mb,disk_bw,net_bw\n"
          << "a,0,1000\n";
    }
    CHECK_THROWS_AS(load_traces(path.string()), std::runtime_error);
    std::filesystem::remove(path);
  }

  SUBCASE("header-only file has no data") {
    {
      std::ofstream out(path);
      out << "series_id,interval,ips,ram_mb,disk_bw,net_bw\n";
    }
    CHECK_THROWS_AS(load_traces(path.string()), std::runtime_error);
    std::filesystem::remove(path);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fogsim/harness/config.hpp"
#include "fogsim/rng.hpp"
#include "fogsim/simulator.hpp"

#include <cmath>

using namespace fogsim;

namespace {

Host wide_host(int id, double ips, double net = 1000.0, HostLayer layer = HostLayer::edge,
               double latency = 0.003) {
  Host h;
  h.id = id;
  h.ips_capacity = ips;
  h.ram_capacity = 1e6;
  h.ram_bw = 1e3;
  h.disk_bw = 1e3;
  h.net_bw = net;
  h.latency = latency;
  h.layer = layer;
  h.power_curve = {50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
  h.cost_rate = 0.1;
  return h;
}

TaskSpec steady_task(int id, int created_at, double ips, double ram, double total) {
  TaskSpec s;
  s.id = id;
  s.created_at = created_at;
  s.app_class = "t";
  s.total_instructions = total;
  s.trace = {{ips, ram, 1.0, 1.0}};
  s.sla_deadline = 6000.0;
  return s;
}

bool same_record(const QoSRecord& a, const QoSRecord& b) {
  return a.interval == b.interval && a.aec == b.aec && a.art == b.art &&
         a.energy_kwh == b.energy_kwh && a.cost == b.cost &&
         a.slo_violation_fraction == b.slo_violation_fraction && a.fairness == b.fairness &&
         a.avg_migration_time == b.avg_migration_time &&
         a.avg_wait_intervals == b.avg_wait_intervals && a.n_active == b.n_active &&
         a.n_waiting == b.n_waiting && a.n_completed == b.n_completed &&
         a.n_migrations == b.n_migrations && a.n_started == b.n_started &&
         a.sum_response == b.sum_response && a.sum_response_sq == b.sum_response_sq &&
         a.sum_migration_time == b.sum_migration_time &&
         a.sum_wait_intervals == b.sum_wait_intervals;
}

}  // namespace

TEST_CASE("migration time") {
  const Host e1 = wide_host(0, 4000, 1000.0, HostLayer::edge, 0.003);
  const Host e2 = wide_host(1, 4000, 500.0, HostLayer::edge, 0.005);
  const Host c1 = wide_host(2, 4000, 1000.0, HostLayer::cloud, 0.076);

  // same host: no move at all
  CHECK(migration_time(e1, e1, 1000.0) == 0.0);

  // same layer: only the transfer term, over the slower link
  CHECK(migration_time(e1, e2, 1000.0) == doctest::Approx(2.0).epsilon(1e-12));

  // across the boundary both ping latencies are paid
  CHECK(migration_time(e1, c1, 1000.0) == doctest::Approx(1.079).epsilon(1e-12));

  // nothing resident in RAM: latency only
  CHECK(migration_time(e1, c1, 0.0) == doctest::Approx(0.079).epsilon(1e-12));
}

TEST_CASE("interval energy") {
  const std::vector<Host> hosts = {wide_host(0, 4000), wide_host(1, 4000)};
  // both idle: 2 * 50 W * 10 s
  CHECK(interval_energy(hosts, {0.0, 0.0}, 10.0) == doctest::Approx(1000.0));
  // one flat out
  CHECK(interval_energy(hosts, {1.0, 0.0}, 10.0) == doctest::Approx(1500.0));
  CHECK_THROWS_AS(interval_energy(hosts, {0.0}, 10.0), std::invalid_argument);
}

TEST_CASE("idle interval accounting") {
  auto st = SimState::make(harness::host_catalog("h10"), 300.0, 1);
  const QoSRecord rec = step(st, Decision{}, {});

  CHECK(rec.aec == doctest::Approx(722.2 / 1246.0).epsilon(1e-12));
  CHECK(rec.art == 0.0);
  CHECK(rec.energy_kwh == doctest::Approx(722.2 * 300.0 / 3.6e6).epsilon(1e-12));
  // every host accrues rent whether or not it runs anything
  const double rate = 4 * 0.0472 + 2 * 0.189 + 2 * 0.166 + 2 * 0.333;
  CHECK(rec.cost == doctest::Approx(rate * 300.0 / 3600.0).epsilon(1e-12));
  CHECK(rec.fairness == 1.0);
  CHECK(rec.n_active == 0);
  CHECK(st.t == 1);
  CHECK(st.history.size() == 1);
}

TEST_CASE("single completion yields response of one interval") {
  auto st = SimState::make({wide_host(0, 4000)}, 300.0, 1);
  // budget sized to finish exactly within the first interval
  stage_arrivals(st, {steady_task(0, 0, 2000, 100, 2000.0 * 300.0)});
  const QoSRecord rec = step(st, Decision{{{0, 0}}}, {});

  CHECK(rec.n_completed == 1);
  CHECK(rec.sum_response == doctest::Approx(300.0));
  CHECK(rec.art == doctest::Approx(1.0));  // only response seen so far
  CHECK(rec.slo_violation_fraction == 0.0);
  CHECK(st.max_response_seen == doctest::Approx(300.0));
  CHECK(st.active.empty());
  REQUIRE(st.finished.size() == 1);
  CHECK(st.finished[0].finished_at == 0);

  SUBCASE("a missed deadline counts as a violation") {
    auto st2 = SimState::make({wide_host(0, 4000)}, 300.0, 1);
    TaskSpec s = steady_task(0, 0, 2000, 100, 2000.0 * 300.0);
    s.sla_deadline = 200.0;  // tighter than one interval
    stage_arrivals(st2, {s});
    const QoSRecord r2 = step(st2, Decision{{{0, 0}}}, {});
    CHECK(r2.n_slo_violations == 1);
    CHECK(r2.slo_violation_fraction == 1.0);
  }
}

TEST_CASE("response spans waiting time") {
  auto st = SimState::make({wide_host(0, 4000)}, 300.0, 1);
  stage_arrivals(st, {steady_task(0, 0, 2000, 100, 2000.0 * 300.0)});
  step(st, Decision{}, {});  // scheduler ignores it, task waits
  CHECK(st.waiting.size() == 1);

  const QoSRecord rec = step(st, Decision{{{0, 0}}}, {});
  CHECK(rec.n_started == 1);
  CHECK(rec.avg_wait_intervals == doctest::Approx(1.0));
  CHECK(rec.n_completed == 1);
  // created at 0, finished at interval 1
  CHECK(rec.sum_response == doctest::Approx(600.0));
}

TEST_CASE("proportional fair-share scaling") {
  auto st = SimState::make({wide_host(0, 8000)}, 300.0, 1);
  TaskSpec a = steady_task(0, 0, 0, 10, 1e12);
  a.trace = {{7000, 10, 0, 0}, {1000, 10, 0, 0}};
  stage_arrivals(st, {a});
  step(st, Decision{{{0, 0}}}, {});

  TaskSpec b = steady_task(1, 1, 0, 10, 1e12);
  b.trace = {{2000, 10, 0, 0}, {7000, 10, 0, 0}};
  stage_arrivals(st, {b});
  step(st, Decision{{{0, 0}, {1, 0}}}, {});
  REQUIRE(st.active.size() == 2);
  const double a_done = st.find_active(0)->instructions_done;
  const double b_done = st.find_active(1)->instructions_done;

  // interval 2: both demand 7000 IPS against an 8000 host
  step(st, Decision{{{0, 0}, {1, 0}}}, {});
  const double share = 8000.0 / 14000.0;
  CHECK(st.host_used[0][0] == doctest::Approx(8000.0).epsilon(1e-12));
  CHECK(st.find_active(0)->last_observed.ips == doctest::Approx(7000.0 * share));
  CHECK(st.find_active(1)->last_observed.ips == doctest::Approx(7000.0 * share));
  CHECK(st.find_active(0)->instructions_done - a_done ==
        doctest::Approx(7000.0 * share * 300.0));
  CHECK(st.find_active(1)->instructions_done - b_done ==
        doctest::Approx(7000.0 * share * 300.0));
  // RAM was nowhere near its limit, so that dimension is untouched
  CHECK(st.find_active(0)->last_observed.ram == doctest::Approx(10.0));
}

TEST_CASE("migration stalls the moved task") {
  auto hosts = harness::host_catalog("h10");
  auto st = SimState::make(hosts, 300.0, 1);
  int cloud = -1;
  for (const auto& h : hosts)
    if (h.layer == HostLayer::cloud && h.net_bw == 1000.0) { cloud = h.id; break; }
  REQUIRE(cloud >= 0);

  stage_arrivals(st, {steady_task(0, 0, 2000, 1000, 1e12)});
  step(st, Decision{{{0, 0}}}, {});  // runs on the edge, observes 1000 MB RAM

  const double before = st.find_active(0)->instructions_done;
  const QoSRecord rec = step(st, Decision{{{0, cloud}}}, {});

  CHECK(rec.n_migrations == 1);
  CHECK(rec.sum_migration_time == doctest::Approx(1.079).epsilon(1e-12));
  CHECK(rec.avg_migration_time == doctest::Approx(1.079).epsilon(1e-12));
  CHECK(st.find_active(0)->host == cloud);
  CHECK_FALSE(st.find_active(0)->migrating_until.has_value());
  // 1.079 s of the interval were lost to the move
  CHECK(st.find_active(0)->instructions_done - before ==
        doctest::Approx(2000.0 * (300.0 - 1.079)).epsilon(1e-12));

  SUBCASE("staying put is not a migration") {
    const QoSRecord r2 = step(st, Decision{{{0, cloud}}}, {});
    CHECK(r2.n_migrations == 0);
  }
}

TEST_CASE("placing a queued task is not a migration") {
  auto st = SimState::make({wide_host(0, 4000), wide_host(1, 4000)}, 300.0, 1);
  stage_arrivals(st, {steady_task(0, 0, 1000, 100, 1e12)});
  step(st, Decision{}, {});
  const QoSRecord rec = step(st, Decision{{{0, 1}}}, {});
  CHECK(rec.n_migrations == 0);
  CHECK(rec.n_started == 1);
}

TEST_CASE("lookahead") {
  auto st = SimState::make({wide_host(0, 4000), wide_host(1, 4000)}, 300.0, 9);
  stage_arrivals(st, {steady_task(0, 0, 1500, 200, 1e12)});
  step(st, Decision{{{0, 0}}}, {});
  stage_arrivals(st, {steady_task(1, 1, 800, 100, 1e12)});

  const Decision d{{{0, 1}, {1, 0}}};

  SUBCASE("does not mutate the state") {
    const auto before = st.fingerprint();
    (void)lookahead(st, d, {}, {{0, Vec4(1500, 200, 1, 1)}, {1, Vec4(800, 100, 1, 1)}});
    CHECK(st.fingerprint() == before);
    CHECK(st.pending_new.size() == 1);  // still staged for the real step
  }

  SUBCASE("missing prediction for an active-to-be task throws") {
    CHECK_THROWS_AS(lookahead(st, d, {}, DemandMap{{0, Vec4(1500, 200, 1, 1)}}),
                    std::invalid_argument);
  }

  SUBCASE("trace-accurate predictions reproduce the real step") {
    DemandMap preds;
    preds[0] = st.find_active(0)->spec.sample(st.find_active(0)->intervals_executed).vec();
    preds[1] = st.find_pending(1)->sample(0).vec();
    const QoSRecord predicted = lookahead(st, d, {}, preds);
    const QoSRecord actual = step(st, d, {});
    CHECK(same_record(predicted, actual));
  }

  SUBCASE("zero predicted demand prices an idle system") {
    auto idle = SimState::make(harness::host_catalog("h10"), 300.0, 9);
    stage_arrivals(idle, {steady_task(0, 0, 1500, 200, 1e12)});
    const QoSRecord rec =
        lookahead(idle, Decision{{{0, 0}}}, {}, DemandMap{{0, Vec4::Zero()}});
    CHECK(rec.aec == doctest::Approx(722.2 / 1246.0).epsilon(1e-12));
  }

  SUBCASE("repeated calls agree") {
    DemandMap preds{{0, Vec4(1200, 150, 1, 1)}, {1, Vec4(700, 90, 1, 1)}};
    const QoSRecord r1 = lookahead(st, d, {}, preds);
    const QoSRecord r2 = lookahead(st, d, {}, preds);
    CHECK(same_record(r1, r2));
  }
}

TEST_CASE("seeded runs are bit-reproducible") {
  auto run_once = [] {
    auto st = SimState::make(harness::host_catalog("h10"), 300.0, 17);
    Rng rng(99);
    int next_id = 0;
    for (int t = 0; t < 30; ++t) {
      std::vector<TaskSpec> arrivals;
      for (std::size_t i = rng.bounded(3); i > 0; --i)
        arrivals.push_back(steady_task(next_id++, t, rng.uniform(500, 2500),
                                       rng.uniform(100, 3000), 4e5));
      stage_arrivals(st, arrivals);
      Decision d;
      for (int id : st.scheduler_input_ids())
        d.assignments.push_back({id, static_cast<int>(rng.bounded(10))});
      step(st, d, {});
    }
    return st.fingerprint();
  };
  CHECK(run_once() == run_once());
}

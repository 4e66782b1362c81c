#include <doctest.h>

#include <cmath>
#include <random>

#include "aor/analytic.hpp"
#include "aor/error.hpp"
#include "aor/simulator.hpp"

namespace sim = aor::sim;
using aor::Holder;
using aor::ProtocolState;

namespace {

sim::SimulationConfig config_at(double p, double p1, double p2, double p3, std::int64_t slots) {
  sim::SimulationConfig c;
  c.params = {{p1, p2, p3}, p};
  c.n_slots = slots;
  c.warmup_slots = 10'000;
  c.seed = 1;
  return c;
}

bool same(const sim::SimulationSummary& a, const sim::SimulationSummary& b) {
  return a.avg_aoi == b.avg_aoi && (a.std_error == b.std_error || (std::isnan(a.std_error) && std::isnan(b.std_error))) &&
         a.mean_s == b.mean_s && a.mean_w == b.mean_w && a.mean_t == b.mean_t && a.mean_z == b.mean_z &&
         a.mean_z2 == b.mean_z2 && a.cov_s_z == b.cov_s_z && a.n_slots == b.n_slots && a.n_cycles == b.n_cycles &&
         a.records == b.records;
}

}  // namespace

TEST_CASE("step: protocol transitions") {
  SUBCASE("destination success wins over a simultaneous relay success") {
    const ProtocolState s{Holder::Source, 5, 1};
    const auto r = sim::step(s, {false, true, true, false}, 7);
    REQUIRE(r.delivered);
    CHECK(*r.delivered == 5);
    CHECK(r.state.holder == Holder::Idle);
    CHECK(r.state.last_delivered_generation_slot == 5);
  }
  SUBCASE("arrival preempts the relay, which then decodes the fresh update") {
    const ProtocolState s{Holder::Relay, 3, 1};
    const auto r = sim::step(s, {true, false, true, false}, 9);
    CHECK_FALSE(r.delivered);
    CHECK(r.state.holder == Holder::Relay);
    CHECK(r.state.generation_slot == 9);
  }
  SUBCASE("idle without arrival stays idle") {
    const ProtocolState s{Holder::Idle, 0, 4};
    const auto r = sim::step(s, {false, true, true, true}, 12);
    CHECK_FALSE(r.delivered);
    CHECK(r.state == s);
  }
  SUBCASE("arrival replaces the source's own pending update") {
    const ProtocolState s{Holder::Source, 2, 0};
    const auto r = sim::step(s, {true, true, false, false}, 6);
    REQUIRE(r.delivered);
    CHECK(*r.delivered == 6);
  }
  SUBCASE("failed source transmission keeps the update at the source") {
    const auto r = sim::step({Holder::Source, 2, 0}, {false, false, false, true}, 4);
    CHECK_FALSE(r.delivered);
    CHECK(r.state.holder == Holder::Source);
    CHECK(r.state.generation_slot == 2);
  }
  SUBCASE("relay delivers its copy; source links are irrelevant") {
    const auto r = sim::step({Holder::Relay, 2, 0}, {false, true, true, true}, 4);
    REQUIRE(r.delivered);
    CHECK(*r.delivered == 2);
  }
  SUBCASE("relay retains on R->D failure") {
    const auto r = sim::step({Holder::Relay, 2, 0}, {false, true, true, false}, 4);
    CHECK_FALSE(r.delivered);
    CHECK(r.state.holder == Holder::Relay);
  }
}

TEST_CASE("property: sample-path law under random outcomes") {
  std::mt19937_64 rng(31);
  std::bernoulli_distribution coin(0.4);
  ProtocolState state;
  aor::Slot previous_age = 1;
  aor::Slot last_generation = -1;
  for (aor::Slot t = 0; t < 200000; ++t) {
    const sim::SlotOutcome o{coin(rng), coin(rng), coin(rng), coin(rng)};
    const auto r = sim::step(state, o, t);
    state = r.state;
    REQUIRE(state.generation_slot <= t);
    const aor::Slot age = (t + 1) - state.last_delivered_generation_slot;
    if (r.delivered) {
      REQUIRE(*r.delivered > last_generation);
      last_generation = *r.delivered;
      REQUIRE(age == (t + 1) - *r.delivered);
      REQUIRE(age >= 1);
    } else if (t > 0) {
      REQUIRE(age == previous_age + 1);
    }
    previous_age = age;
  }
}

TEST_CASE("config validation") {
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 100);
  c.warmup_slots = 100;
  CHECK_THROWS_AS(sim::run(c), aor::Error);
  c.warmup_slots = -1;
  CHECK_THROWS_AS(sim::run(c), aor::Error);
  c.warmup_slots = 0;
  c.n_replications = 0;
  CHECK_THROWS_AS(sim::run(c), aor::Error);
  c.n_replications = 1;
  c.n_slots = 0;
  CHECK_THROWS_AS(sim::run(c), aor::Error);
  c = config_at(1.5, 0.25, 0.8, 0.8, 100);
  c.warmup_slots = 0;
  CHECK_THROWS_AS(sim::run(c), aor::Error);
}

TEST_CASE("deterministic delivery every slot") {
  auto c = config_at(1.0, 1.0, 0.3, 0.6, 100'000);
  c.record_cycles = true;
  const auto s = sim::run(c);
  CHECK(s.avg_aoi == 1.0);
  CHECK(s.n_cycles > 0);
  for (const auto& r : s.records) {
    CHECK(r.z == 1);
    CHECK(r.s == 1);
  }
}

TEST_CASE("time-average AoI against the closed forms at 1e7 slots") {
  const auto coop = sim::run(config_at(0.5, 0.25, 0.8, 0.8, 10'000'000));
  CHECK(coop.avg_aoi == doctest::Approx(3.5806451612903225).epsilon(0.005));
  CHECK(coop.avg_aoi >= 1.0);
  // Renewal-reward and time-average estimators of the same limit.
  CHECK(coop.cycles.renewal_aoi == doctest::Approx(coop.avg_aoi).epsilon(0.002));

  auto c = config_at(0.5, 0.25, 0.8, 0.8, 10'000'000);
  c.mode = sim::Mode::NonCooperative;
  CHECK(sim::run(c).avg_aoi == doctest::Approx(5.0).epsilon(0.005));
}

TEST_CASE("non-cooperative runs ignore P2 and P3 entirely") {
  auto a = config_at(0.6, 0.3, 0.1, 0.9, 300'000);
  a.mode = sim::Mode::NonCooperative;
  auto b = a;
  b.params.links.p2 = 0.95;
  b.params.links.p3 = 0.05;
  CHECK(same(sim::run(a), sim::run(b)));
}

TEST_CASE("replications: determinism, parallel equals serial") {
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 200'000);
  c.n_replications = 6;
  c.record_cycles = true;
  const auto serial = sim::run_serial(c);
  CHECK(same(serial, sim::run(c, 1)));
  CHECK(same(serial, sim::run(c, 3)));
  CHECK(same(serial, sim::run(c, 8)));
  CHECK(same(sim::run(c), sim::run(c)));

  auto other = c;
  other.seed = 2;
  CHECK_FALSE(same(serial, sim::run(other)));

  const auto first = sim::run_replication(c, 0);
  const auto second = sim::run_replication(c, 1);
  CHECK(first.avg_aoi != second.avg_aoi);
}

TEST_CASE("pooled replications within three standard errors") {
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 1'000'000);
  c.n_replications = 10;
  const auto s = sim::run(c);
  CHECK(std::abs(s.avg_aoi - 3.5806451612903225) < 3 * s.std_error);
  CHECK(s.n_replications == 10);
}

TEST_CASE("standard error shrinks like 1/sqrt(replications)") {
  // Enough replications that the spread of each estimate itself is small.
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 50'000);
  c.warmup_slots = 1000;
  c.n_replications = 16;
  const double se16 = sim::run(c).std_error;
  c.n_replications = 64;
  const double se64 = sim::run(c).std_error;
  const double ratio = se16 / se64;  // expected 2
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.8);
}

TEST_CASE("single replication uses batch means") {
  const auto s = sim::run(config_at(0.5, 0.25, 0.8, 0.8, 1'000'000));
  CHECK(s.std_error > 0.0);
  CHECK(std::abs(s.avg_aoi - 3.5806451612903225) < 4 * s.std_error);
  auto tiny = config_at(0.5, 0.25, 0.8, 0.8, 20);
  tiny.warmup_slots = 0;
  CHECK(std::isnan(sim::run(tiny).std_error));
}

TEST_CASE("cycle records: identities") {
  auto c = config_at(0.7, 0.3, 0.6, 0.9, 500'000);
  c.n_replications = 2;
  c.record_cycles = true;
  const auto s = sim::run(c);
  REQUIRE(s.records.size() == static_cast<std::size_t>(s.n_cycles));
  for (const auto& r : s.records) {
    REQUIRE(r.z == r.w + r.t);
    REQUIRE(r.s >= 1);
    REQUIRE(r.t >= 1);
    REQUIRE(r.w >= 0);
    REQUIRE(r.s <= r.t);
  }
  CHECK(s.mean_z == doctest::Approx(s.mean_w + s.mean_t).epsilon(1e-12));
}

TEST_CASE("cycle records: area identity within one replication") {
  auto c = config_at(0.4, 0.2, 0.7, 0.8, 300'000);
  c.record_cycles = true;
  const auto s = sim::run(c);
  for (std::size_t i = 1; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    const double expected = static_cast<double>(s.records[i - 1].s) * r.z + 0.5 * static_cast<double>(r.z * r.z - r.z);
    REQUIRE(r.q == expected);
  }
}

TEST_CASE("cycle_statistics matches the streaming accumulator") {
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 300'000);
  c.record_cycles = true;
  const auto s = sim::run(c);
  const auto batch = sim::cycle_statistics(s.records);
  CHECK(batch.mean_s == s.mean_s);
  CHECK(batch.mean_z2 == s.mean_z2);
  CHECK(batch.cov_s_z == s.cov_s_z);
  CHECK(batch.n_pairs == batch.n_cycles - 1);
  CHECK(batch.renewal_aoi == doctest::Approx(batch.mean_q / batch.mean_z).epsilon(1e-12));

  CHECK_THROWS_AS(sim::cycle_statistics({}), aor::Error);
  const aor::CycleRecord one{1, 0, 1, 1, 1.0};
  CHECK_THROWS_AS(sim::cycle_statistics(std::span<const aor::CycleRecord>(&one, 1)), aor::Error);
}

TEST_CASE("empirical moments against the closed forms") {
  const aor::SystemParams params{{0.25, 0.8, 0.8}, 0.5};
  auto c = config_at(0.5, 0.25, 0.8, 0.8, 4'000'000);
  const auto s = sim::run(c);
  const auto m = aor::analytic::moments(params);
  REQUIRE(s.n_cycles >= 1'000'000);
  CHECK(std::abs(s.cycles.mean_s - m.e_s) < 3 * s.cycles.se_s);
  CHECK(std::abs(s.cycles.mean_w - m.e_w) < 3 * s.cycles.se_w);
  CHECK(std::abs(s.cycles.mean_t - m.e_t) < 3 * s.cycles.se_t);
  CHECK(std::abs(s.cycles.mean_z - m.e_z) < 3 * s.cycles.se_z);
  CHECK(std::abs(s.cycles.mean_z2 - m.e_z2) < 3 * s.cycles.se_z2);
  CHECK(s.cycles.mean_w == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s.cycles.mean_w2 == doctest::Approx(3.0).epsilon(0.02));
  CHECK(s.cycles.mean_t2 == doctest::Approx(m.e_t2).epsilon(0.01));
  // Service time of the previous cycle is uncorrelated with the next interdeparture time.
  CHECK(std::abs(s.cycles.mean_s_prev_z - s.cycles.mean_s_prev * s.cycles.mean_z_pair) /
            (s.cycles.mean_s_prev * s.cycles.mean_z_pair) <
        0.01);
}

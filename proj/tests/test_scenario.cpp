#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spatial/errors.hpp"
#include "spatial/generators.hpp"
#include "spatial/scenario.hpp"
#include "spatial/scenario_io.hpp"

using namespace spatial;

namespace {

ScenarioConfig line_config(std::vector<double> positions, double delta) {
  ScenarioConfig c;
  c.channels = {{0.2, 0.2}};
  const std::size_t L = positions.size();
  c.space.distances.assign(L, std::vector<double>(L));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) c.space.distances[i][j] = std::abs(positions[i] - positions[j]);
  }
  c.space.delta = delta;
  UserSpec u;
  u.p = 0.5;
  c.users = {u, u};
  c.rates.user_channel_means = {{2.0}, {2.0}};
  return c;
}

void expect_invariant(const ScenarioConfig& c, const std::string& name) {
  try {
    validate_scenario(c);
    FAIL("expected rejection: " << name);
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == name);
  }
}

}  // namespace

TEST_CASE("stationary availability") {
  CHECK(stationary_availability(0.2, 0.2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stationary_availability(0.3, 0.0) == 1.0);
  CHECK(stationary_availability(0.1, 0.3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(stationary_availability(0.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(stationary_availability(0.0, 0.0), std::domain_error);
}

TEST_CASE("channel state transitions") {
  Rng rng(7);
  const ChannelSpec always_wake{1.0, 0.5, 0.0};
  const ChannelSpec absorbing{0.5, 0.0, 0.0};
  for (int i = 0; i < 1000; ++i) {
    CHECK(step_channel_state(0, always_wake, rng) == 1);
    CHECK(step_channel_state(1, absorbing, rng) == 1);
  }
}

TEST_CASE("channel idle fraction converges to theta") {
  // Two-state chain with eps = xi = 0.2: lag-k correlation is 0.6^k, so the
  // variance of the mean is inflated by (1 + 0.6) / (1 - 0.6) = 4.
  Rng rng(11);
  const ChannelSpec ch{0.2, 0.2, 0.5};
  const std::size_t steps = 1'000'000;
  std::uint8_t s = 1;
  std::size_t idle = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    s = step_channel_state(s, ch, rng);
    idle += s;
  }
  const double frac = static_cast<double>(idle) / steps;
  const double sigma = std::sqrt(0.25 * 4.0 / steps);
  CHECK(std::abs(frac - 0.5) < 0.01);
  CHECK(std::abs(frac - 0.5) < 3.0 * sigma);
}

TEST_CASE("mean-exponential rates are unbiased") {
  auto c = line_config({0.0}, 1.0);
  c.users.resize(1);
  c.rates.user_channel_means = {{2.0}};
  const Scenario s = validate_scenario(c);
  Rng rng(5);
  const std::size_t draws = 1'000'000;
  double sum = 0.0;
  for (std::size_t i = 0; i < draws; ++i) sum += sample_rate(s, 0, 0, 0, rng);
  const double mean = sum / draws;
  CHECK(std::abs(mean - 2.0) < 0.01);
  CHECK(std::abs(mean - 2.0) < 3.0 * 2.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("zero mean rate is rejected") {
  auto c = line_config({0.0}, 1.0);
  c.rates.user_channel_means = {{0.0}, {2.0}};
  expect_invariant(c, "rate-mean-positive");
}

TEST_CASE("shannon-rayleigh mean matches closed form and vanishes with the gain") {
  for (double snr : {0.01, 0.3, 1.0, 7.5, 100.0, 1e4}) {
    CHECK(expected_log2_one_plus(snr) ==
          doctest::Approx(oracle::expected_log2_closed_form(snr)).epsilon(1e-9));
  }
  auto c = line_config({0.0}, 1.0);
  c.rates.mode = RateMode::ShannonRayleigh;
  c.rates.user_channel_means.clear();
  c.rates.shannon.bandwidth_mhz = {2.0};
  c.rates.shannon.noise_dbm = -100.0;
  c.rates.shannon.mean_gain = {{1e-12}, {1e-25}};
  const Scenario s = build_scenario(c);
  const double snr = 100.0 * 1e-12 / dbm_to_mw(-100.0);
  CHECK(s.mean_rate(0, 0, 0) ==
        doctest::Approx(2.0 * oracle::expected_log2_closed_form(snr)).epsilon(1e-9));
  CHECK(s.mean_rate(1, 0, 0) < 1e-9);
  Rng rng(3);
  double sum = 0.0;
  const int draws = 400'000;
  for (int i = 0; i < draws; ++i) sum += sample_rate(s, 0, 0, 0, rng);
  CHECK(sum / draws == doctest::Approx(s.mean_rate(0, 0, 0)).epsilon(0.01));
  for (int i = 0; i < 100; ++i) CHECK(sample_rate(s, 1, 0, 0, rng) < 1e-6);
}

TEST_CASE("interference graph edges") {
  SUBCASE("same location") {
    const Scenario s = validate_scenario(line_config({0.0}, 0.5));
    const std::vector<std::size_t> d{0, 0};
    CHECK(build_interference_graph(s, d).edge_count() == 1);
  }
  SUBCASE("distance exactly delta is an edge") {
    const Scenario s = validate_scenario(line_config({0.0, 1.5}, 1.5));
    const std::vector<std::size_t> d{0, 1};
    CHECK(build_interference_graph(s, d).has_edge(0, 1));
  }
  SUBCASE("far apart") {
    const Scenario s = validate_scenario(line_config({0.0, 1.5}, 1.4999));
    const std::vector<std::size_t> d{0, 1};
    CHECK(build_interference_graph(s, d).edge_count() == 0);
  }
}

TEST_CASE("graph symmetry and delta monotonicity") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = oracle::random_instance(rng);
    c.explicit_edges.reset();
    const Scenario s = validate_scenario(c);
    std::vector<std::size_t> d(s.num_users());
    for (std::size_t n = 0; n < d.size(); ++n) {
      const auto& allowed = s.user(n).allowed_locations;
      d[n] = allowed[rng() % allowed.size()];
    }
    const auto g = build_interference_graph(s, d);
    auto wider = c;
    wider.space.delta += 0.7;
    const auto g2 = build_interference_graph(validate_scenario(wider), d);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK_FALSE(g.has_edge(i, i));
      for (std::size_t j = 0; j < d.size(); ++j) {
        CHECK(g.has_edge(i, j) == g.has_edge(j, i));
        CHECK(g.has_edge(i, j) == oracle::conflict(c, i, d[i], j, d[j]));
        if (g.has_edge(i, j)) CHECK(g2.has_edge(i, j));
      }
    }
  }
}

TEST_CASE("feasible moves") {
  auto c = line_config({0.0, 1.0, 5.0}, 1.0);
  c.users[0].travel_radius = 0.0;
  c.users[1].travel_radius = 2.0;
  auto far = c;
  far.users[1].travel_radius = 10.0;
  const Scenario s = validate_scenario(c);
  CHECK(feasible_moves(s, 0, 0).empty());
  CHECK(feasible_moves(s, 1, 0) == std::vector<std::size_t>{1});
  CHECK(feasible_moves(validate_scenario(far), 1, 0) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("validation errors name the invariant") {
  auto c = line_config({0.0}, 1.0);
  c.users[1].nu = 40.0;  // zeta p = 50
  expect_invariant(c, "energy-constraint");

  auto asym = line_config({0.0}, 1.0);
  asym.explicit_edges = std::vector<Edge>{{0, 1}};
  expect_invariant(asym, "explicit-edge-symmetry");

  auto loop = line_config({0.0}, 1.0);
  loop.explicit_edges = std::vector<Edge>{{0, 0}};
  expect_invariant(loop, "explicit-edge-self-loop");

  auto p_low = line_config({0.0}, 1.0);
  p_low.users[0].p = 0.005;
  expect_invariant(p_low, "contention-probability");

  auto dist = line_config({0.0, 1.0}, 1.0);
  dist.space.distances[0][1] = 2.0;
  expect_invariant(dist, "distance-symmetry");

  auto h = line_config({0.0}, 1.0);
  h.space.scale = {0.0};
  expect_invariant(h, "location-scale-positive");

  auto tau = line_config({0.0}, 1.0);
  tau.users[0].timer_density = 0.0;
  expect_invariant(tau, "timer-density");

  try {
    auto bad = line_config({0.0}, 1.0);
    bad.users[1].nu = 40.0;
    validate_scenario(bad);
  } catch (const ValidationError& e) {
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 1);
  }
}

TEST_CASE("theta stored on load") {
  const Scenario s = validate_scenario(line_config({0.0}, 1.0));
  CHECK(s.channel(0).theta == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("json round trip and strict keys") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto c = oracle::random_instance(rng);
    const auto back = scenario_from_json(scenario_to_json(c));
    CHECK(scenario_to_json(back) == scenario_to_json(c));
  }
  auto j = scenario_to_json(line_config({0.0}, 1.0));
  j["users"][0]["speed"] = 3;
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);

  auto xy = scenario_to_json(line_config({0.0, 1.0}, 1.0));
  xy["locations"].erase("distances");
  xy["locations"]["coordinates"] = {{0.0, 0.0}, {3.0, 4.0}};
  const auto parsed = scenario_from_json(xy);
  CHECK(parsed.space.distances[0][1] == doctest::Approx(5.0));
}

TEST_CASE("every preset validates across seeds") {
  for (const auto& preset : preset_names()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      GeneratorParams gp;
      if (preset == "scatter-square") gp.users = 50;
      CAPTURE(preset);
      CAPTURE(seed);
      const auto cfg = generate_scenario(preset, gp, seed);
      CHECK_NOTHROW(validate_scenario(scenario_from_json(scenario_to_json(cfg))));
    }
  }
  CHECK_THROWS_AS(generate_scenario("nope", {}, 1), ConfigError);
}

TEST_CASE("reference rate rows and grid scales") {
  const auto c = generate_scenario("paper-9x5", {}, 3);
  REQUIRE(c.users.size() == 9);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(c.rates.user_channel_means[n] == std::vector<double>{0.1, 0.3, 0.8, 1.0, 1.5});
  }
  CHECK(c.rates.user_channel_means[4] == std::vector<double>{0.2, 0.6, 1.6, 2.0, 3.0});
  CHECK(c.rates.user_channel_means[8] == std::vector<double>{0.5, 1.5, 4.0, 5.0, 7.5});
  for (const auto& u : c.users) {
    const double tenths = u.p * 10.0;
    CHECK(std::abs(tenths - std::round(tenths)) < 1e-12);
  }

  GeneratorParams gp;
  gp.rows = 5;
  gp.cols = 6;
  gp.obstacles = 6;
  const auto grid = generate_scenario("grid-obstacles", gp, 8);
  for (double h : grid.space.scale) CHECK((h == 0.5 || h == 1.0 || h == 2.0));
  CHECK(grid.space.size() == 24);
}

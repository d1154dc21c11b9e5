#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spatial/analysis.hpp"
#include "spatial/generators.hpp"

using namespace spatial;

namespace {

ScenarioConfig positive_instance(std::mt19937_64& gen, std::size_t users, std::size_t channels) {
  oracle::InstanceShape shape{users, channels, 1, 0.05, 0.5, 1.0};
  auto c = oracle::random_instance(gen, shape);
  std::uniform_real_distribution<double> big(50.0, 400.0);
  for (auto& row : c.rates.user_channel_means) {
    for (auto& b : row) b = big(gen);
  }
  return c;
}

}  // namespace

TEST_CASE("bound quantities") {
  const Scenario s = validate_scenario(generate_scenario("uniqueness-2x2x2", {}, 0));
  const std::vector<std::size_t> d{0, 1};
  const auto q = bound_quantities(s, d);
  CHECK(q.varpi == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(q.max_degree == 1);
  CHECK(q.e_min == doctest::Approx(std::log(0.25)).epsilon(1e-14));

  GeneratorParams gp;
  gp.degree = 4;
  const Scenario ring = validate_scenario(generate_scenario("paper-9x5", gp, 2));
  CHECK(bound_quantities(ring, ring.initial_locations()).max_degree == 4);

  GeneratorParams none;
  none.graph = "gnp";
  none.edge_probability = 0.0;
  const Scenario empty = validate_scenario(generate_scenario("paper-9x5", none, 2));
  const auto qe = bound_quantities(empty, empty.initial_locations());
  CHECK(qe.max_degree == 0);
  CHECK(qe.bound() == 1.0);
}

TEST_CASE("trivial price of anarchy") {
  ScenarioConfig c;
  c.channels = {{0.5, 0.5}, {0.5, 0.5}};
  c.space.distances = {{0.0}};
  UserSpec u;
  u.p = 0.5;
  c.users = {u};
  c.rates.user_channel_means = {{100.0, 200.0}};
  const Scenario one = validate_scenario(c);
  const auto r = poa(one, one.initial_locations());
  CHECK(r.poa == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.applicable);

  GeneratorParams none;
  none.graph = "gnp";
  none.edge_probability = 0.0;
  const Scenario empty = validate_scenario(generate_scenario("paper-9x5", none, 4));
  const auto re = poa(empty, empty.initial_locations());
  CHECK(re.poa == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bound holds on positive random instances") {
  std::mt19937_64 gen(101);
  int applicable = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Scenario s = validate_scenario(positive_instance(gen, 4, 3));
    const auto r = poa(s, s.initial_locations());
    if (!r.applicable) continue;
    ++applicable;
    CHECK(r.poa <= 1.0 + 1e-12);
    CHECK(r.poa >= r.bound_value - 1e-12);
  }
  CHECK(applicable >= 100);
}

TEST_CASE("normalized mode always applies and keeps the bound") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = validate_scenario(oracle::random_instance(gen, {4, 3, 2}));
    const auto r = poa(s, s.initial_locations(), true);
    CHECK(r.applicable);
    CHECK(r.poa <= 1.0 + 1e-12);
    CHECK(r.poa >= r.bound_value - 1e-12);
    const auto raw = poa(s, s.initial_locations(), false);
    CHECK(raw.nash_set == r.nash_set);
    CHECK(raw.optimum.profile == r.optimum.profile);
  }
}

TEST_CASE("per-user upper bound and equilibrium floor") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 150; ++trial) {
    const Scenario s = validate_scenario(oracle::random_instance(gen));
    const auto d = s.initial_locations();
    const auto q = bound_quantities(s, d);
    const auto g = build_interference_graph(s, d);
    const Profile base{d, ChannelProfile(s.num_users(), 0)};
    for_each_profile(s, DeviationSpace::Channels, base, kDefaultEnumerationBudget,
                     [&](const Profile& p) {
                       for (std::size_t n = 0; n < p.size(); ++n) {
                         CHECK(utility(s, p, n) <= q.e_user[n] + 1e-9);
                       }
                     });
    for (const auto& p : enumerate_nash(s, DeviationSpace::Channels, base)) {
      for (std::size_t n = 0; n < p.size(); ++n) {
        double floor = q.e_user[n];
        for (auto i : g.neighbors[n]) floor += s.log_idle(i);
        CHECK(utility(s, p, n) >= floor - 1e-9);
      }
    }
  }
}

TEST_CASE("joint bound ingredients") {
  ScenarioConfig c = generate_scenario("uniqueness-2x2x2", {}, 0);
  c.space.distances = {{0.0}};
  c.space.scale = {1.0};
  for (auto& row : c.rates.user_channel_means) row = {100.0, 100.0};
  for (auto& u : c.users) u.allowed_locations.clear();
  const Scenario single = validate_scenario(c);
  const auto jb = joint_bound(single);
  const auto q = bound_quantities(single, single.initial_locations());
  CHECK(jb.eta == doctest::Approx(static_cast<double>(q.max_degree) / q.e_min).epsilon(1e-14));
  CHECK(jb.applicable);
  CHECK(jb.bound == doctest::Approx(1.0 - jb.eta * jb.varpi).epsilon(1e-14));

  // A far location has no edges, so K(d) cannot grow by using it.
  ScenarioConfig far = c;
  far.space.distances = {{0.0, 100.0}, {100.0, 0.0}};
  far.space.scale = {1.0, 1.0};
  far.space.delta = 1.0;
  for (auto& row : far.rates.user_channel_means) row = {100.0, 100.0};
  const Scenario two = validate_scenario(far);
  CHECK(bound_quantities(two, std::vector<std::size_t>{0, 1}).max_degree <=
        bound_quantities(two, std::vector<std::size_t>{0, 0}).max_degree);
}

TEST_CASE("joint price of anarchy against the joint bound") {
  std::mt19937_64 gen(57);
  int applicable = 0;
  for (int trial = 0; trial < 150; ++trial) {
    oracle::InstanceShape shape{3, 2, 3, 0.05, 0.5, 0.0};
    auto c = oracle::random_instance(gen, shape);
    std::uniform_real_distribution<double> big(50.0, 400.0);
    for (auto& row : c.rates.user_channel_means) {
      for (auto& b : row) b = big(gen);
    }
    const Scenario s = validate_scenario(c);
    const auto r = joint_poa(s);
    if (!r.applicable) continue;
    ++applicable;
    CAPTURE(trial);
    CHECK(r.poa <= 1.0 + 1e-12);
    CHECK(r.poa >= r.bound.bound - 1e-12);
  }
  CHECK(applicable >= 50);
}

TEST_CASE("performance loss") {
  CHECK(performance_loss(3.0, 3.0) == 0.0);
  CHECK(performance_loss(2.0, 4.0) == doctest::Approx(50.0));
  UtilityNormalization norm{-4.0, 0.0, 0.05};
  // Nonpositive optimum: both totals move to the shared positive scale.
  const double loss = performance_loss(-6.0, -4.0, norm, 2);
  const double run = normalized_total(-6.0, norm, 2);
  const double opt = normalized_total(-4.0, norm, 2);
  CHECK(loss == doctest::Approx((opt - run) / opt * 100.0));
  CHECK(opt > 0.0);

  const Scenario s = validate_scenario(generate_scenario("uniqueness-2x2x2", {}, 0));
  const Profile base = initial_profile(s);
  const auto opt_joint = centralized_optimum(s, DeviationSpace::Joint, base);
  const auto jnorm = utility_normalization(s, DeviationSpace::Joint, base);
  for (const auto& p : enumerate_nash(s, DeviationSpace::Joint, base)) {
    CHECK(performance_loss(total_utility(s, p), opt_joint.value, jnorm, 2) ==
          doctest::Approx(0.0));
  }
}

#include "spatial/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "spatial/errors.hpp"

namespace spatial {

double stationary_availability(double epsilon, double xi) {
  if (!(epsilon > 0.0) || !(epsilon + xi > 0.0)) {
    throw std::domain_error("stationary availability needs epsilon > 0");
  }
  return epsilon / (epsilon + xi);
}

std::uint8_t step_channel_state(std::uint8_t state, const ChannelSpec& spec,
                                Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double flip = state == 0 ? spec.epsilon : spec.xi;
  if (flip >= 1.0) return state ^ 1U;
  if (flip <= 0.0) return state;
  return u(rng) < flip ? static_cast<std::uint8_t>(state ^ 1U) : state;
}

double expected_log2_one_plus(double mean_snr) {
  if (mean_snr <= 0.0) return 0.0;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [mean_snr](double x) {
    return std::log1p(mean_snr * x) * std::exp(-x);
  };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity()) /
         std::log(2.0);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

bool Scenario::is_allowed(std::size_t n, std::size_t d) const {
  return d < num_locations() && allowed_[n * num_locations() + d] != 0;
}

LocationProfile Scenario::initial_locations() const {
  LocationProfile d(num_users());
  for (std::size_t n = 0; n < num_users(); ++n) d[n] = user(n).initial_location;
  return d;
}

ChannelProfile Scenario::initial_channels() const {
  ChannelProfile a(num_users());
  for (std::size_t n = 0; n < num_users(); ++n) a[n] = user(n).initial_channel;
  return a;
}

namespace {

double configured_mean(const ScenarioConfig& c, std::size_t n, std::size_t m,
                       std::size_t d) {
  const double h = c.space.scale.empty() ? 1.0 : c.space.scale.at(d);
  switch (c.rates.mode) {
    case RateMode::ShannonRayleigh: {
      const auto& sh = c.rates.shannon;
      const double snr =
          c.users[n].zeta * sh.mean_gain.at(n).at(m) / dbm_to_mw(sh.noise_dbm);
      return h * sh.bandwidth_mhz.at(m) * expected_log2_one_plus(snr);
    }
    case RateMode::MeanExponential:
    case RateMode::Deterministic:
      if (!c.rates.means.empty()) return c.rates.means.at(n).at(m).at(d);
      return h * c.rates.user_channel_means.at(n).at(m);
  }
  return 0.0;
}

[[noreturn]] void reject(const char* invariant, std::optional<std::size_t> idx,
                         const std::string& detail) {
  throw ValidationError(invariant, idx, detail);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_config(const ScenarioConfig& c) {
  if (c.channels.empty()) reject("channels-nonempty", std::nullopt, "no channels");
  if (c.users.empty()) reject("users-nonempty", std::nullopt, "no users");
  if (c.space.size() == 0) reject("locations-nonempty", std::nullopt, "no locations");
  if (!(c.p_min > 0.0 && c.p_min < c.p_max && c.p_max < 1.0)) {
    reject("contention-bounds", std::nullopt,
           "need 0 < p_min < p_max < 1, got (" + fmt(c.p_min) + ", " +
               fmt(c.p_max) + ")");
  }

  for (std::size_t m = 0; m < c.channels.size(); ++m) {
    const auto& ch = c.channels[m];
    if (!(ch.epsilon > 0.0 && ch.epsilon <= 1.0)) {
      reject("channel-epsilon", m, "epsilon must lie in (0,1], got " + fmt(ch.epsilon));
    }
    if (!(ch.xi >= 0.0 && ch.xi < 1.0)) {
      reject("channel-xi", m, "xi must lie in [0,1), got " + fmt(ch.xi));
    }
  }

  const std::size_t L = c.space.size();
  for (std::size_t i = 0; i < L; ++i) {
    if (c.space.distances[i].size() != L) {
      reject("distance-matrix-shape", i, "row length differs from location count");
    }
  }
  for (std::size_t i = 0; i < L; ++i) {
    if (c.space.distances[i][i] != 0.0) reject("distance-diagonal", i, "nonzero self distance");
    for (std::size_t j = 0; j < L; ++j) {
      const double dij = c.space.distances[i][j];
      if (!(dij >= 0.0) || !std::isfinite(dij)) {
        reject("distance-nonnegative", i, "negative or non-finite distance");
      }
      if (dij != c.space.distances[j][i]) reject("distance-symmetry", i, "asymmetric distance");
    }
  }
  if (!c.space.scale.empty() && c.space.scale.size() != L) {
    reject("location-scale-shape", std::nullopt, "scale length differs from location count");
  }
  for (std::size_t d = 0; d < c.space.scale.size(); ++d) {
    if (!(c.space.scale[d] > 0.0)) reject("location-scale-positive", d, "h_d must be > 0");
  }
  if (!(c.space.delta >= 0.0)) reject("delta-nonnegative", std::nullopt, "delta must be >= 0");

  const std::size_t N = c.users.size();
  const std::size_t M = c.channels.size();
  for (std::size_t n = 0; n < N; ++n) {
    const auto& u = c.users[n];
    if (!(u.p > c.p_min && u.p < c.p_max)) {
      reject("contention-probability", n,
             "p = " + fmt(u.p) + " outside (" + fmt(c.p_min) + ", " + fmt(c.p_max) + ")");
    }
    if (!(u.zeta * u.p <= u.nu)) {
      reject("energy-constraint", n,
             "zeta*p = " + fmt(u.zeta * u.p) + " exceeds nu = " + fmt(u.nu));
    }
    if (!(u.travel_radius >= 0.0)) reject("travel-radius", n, "must be >= 0");
    if (!(u.timer_density > 0.0)) reject("timer-density", n, "must be > 0");
    // An empty list means every location.
    for (auto d : u.allowed_locations) {
      if (d >= L) reject("allowed-locations", n, "location index out of range");
    }
    const bool initial_ok =
        u.allowed_locations.empty()
            ? u.initial_location < L
            : std::find(u.allowed_locations.begin(), u.allowed_locations.end(),
                        u.initial_location) != u.allowed_locations.end();
    if (!initial_ok) reject("initial-location", n, "not among allowed locations");
    if (u.initial_channel >= M) reject("initial-channel", n, "channel index out of range");
  }

  const auto& r = c.rates;
  if (r.mode == RateMode::ShannonRayleigh) {
    if (r.shannon.bandwidth_mhz.size() != M) {
      reject("shannon-bandwidth-shape", std::nullopt, "one bandwidth per channel");
    }
    if (r.shannon.mean_gain.size() != N) reject("shannon-gain-shape", std::nullopt, "one row per user");
    for (std::size_t n = 0; n < N; ++n) {
      if (r.shannon.mean_gain[n].size() != M) reject("shannon-gain-shape", n, "one gain per channel");
    }
  } else if (!r.means.empty()) {
    if (r.means.size() != N) reject("rate-means-shape", std::nullopt, "one block per user");
    for (std::size_t n = 0; n < N; ++n) {
      if (r.means[n].size() != M) reject("rate-means-shape", n, "one row per channel");
      for (const auto& row : r.means[n]) {
        if (row.size() != L) reject("rate-means-shape", n, "one mean per location");
      }
    }
  } else {
    if (r.user_channel_means.size() != N) reject("rate-means-shape", std::nullopt, "one row per user");
    for (std::size_t n = 0; n < N; ++n) {
      if (r.user_channel_means[n].size() != M) reject("rate-means-shape", n, "one mean per channel");
    }
  }

  if (c.explicit_edges) {
    const auto& edges = *c.explicit_edges;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto [i, j] = edges[k];
      if (i >= N || j >= N) reject("explicit-edge-index", k, "user index out of range");
      if (i == j) reject("explicit-edge-self-loop", k, "self loop");
      if (std::find(edges.begin(), edges.end(), Edge{j, i}) == edges.end()) {
        reject("explicit-edge-symmetry", k,
               "(" + std::to_string(i) + "," + std::to_string(j) + ") has no reverse");
      }
    }
  }
}

}  // namespace

Scenario build_scenario(ScenarioConfig config) {
  Scenario s;
  for (auto& ch : config.channels) {
    ch.theta = stationary_availability(ch.epsilon, ch.xi);
  }
  const std::size_t L = config.space.size();
  if (config.space.scale.empty()) config.space.scale.assign(L, 1.0);
  for (auto& u : config.users) {
    if (u.allowed_locations.empty()) {
      u.allowed_locations.resize(L);
      std::iota(u.allowed_locations.begin(), u.allowed_locations.end(), 0);
    }
  }
  s.config_ = std::move(config);
  const auto& c = s.config_;
  const std::size_t N = c.users.size();
  const std::size_t M = c.channels.size();

  s.means_.assign(N * M * L, 0.0);
  s.log_base_.assign(N * M * L, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t d = 0; d < L; ++d) {
        const double mean = configured_mean(c, n, m, d);
        s.means_[s.flat(n, m, d)] = mean;
        s.log_base_[s.flat(n, m, d)] =
            std::log(c.channels[m].theta * mean * c.users[n].p);
      }
    }
  }
  s.log_idle_.resize(N);
  for (std::size_t n = 0; n < N; ++n) s.log_idle_[n] = std::log1p(-c.users[n].p);

  s.close_.assign(L * L, 0);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      s.close_[i * L + j] = c.space.distances[i][j] <= c.space.delta ? 1 : 0;
    }
  }
  s.edges_.assign(N * N, 0);
  if (c.explicit_edges) {
    for (const auto& [i, j] : *c.explicit_edges) {
      if (i < N && j < N && i != j) s.edges_[i * N + j] = 1;
    }
  }
  s.allowed_.assign(N * L, 0);
  for (std::size_t n = 0; n < N; ++n) {
    for (auto d : c.users[n].allowed_locations) {
      if (d < L) s.allowed_[n * L + d] = 1;
    }
  }
  return s;
}

Scenario validate_scenario(ScenarioConfig config) {
  check_config(config);
  Scenario s = build_scenario(std::move(config));
  for (std::size_t n = 0; n < s.num_users(); ++n) {
    for (std::size_t m = 0; m < s.num_channels(); ++m) {
      for (std::size_t d = 0; d < s.num_locations(); ++d) {
        const double b = s.mean_rate(n, m, d);
        if (!(b > 0.0) || !std::isfinite(b)) {
          reject("rate-mean-positive", n,
                 "mean rate for channel " + std::to_string(m) + " at location " +
                     std::to_string(d) + " is " + fmt(b));
        }
      }
    }
  }
  return s;
}

std::size_t InterferenceGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors) twice += nb.size();
  return twice / 2;
}

bool InterferenceGraph::has_edge(std::size_t i, std::size_t j) const {
  return std::binary_search(neighbors[i].begin(), neighbors[i].end(), j);
}

std::size_t InterferenceGraph::max_degree() const {
  std::size_t k = 0;
  for (const auto& nb : neighbors) k = std::max(k, nb.size());
  return k;
}

InterferenceGraph build_interference_graph(const Scenario& s,
                                           std::span<const std::size_t> d) {
  const std::size_t N = s.num_users();
  if (d.size() != N) {
    throw ValidationError("location-profile-size", std::nullopt,
                          "profile has " + std::to_string(d.size()) +
                              " entries for " + std::to_string(N) + " users");
  }
  for (std::size_t n = 0; n < N; ++n) {
    if (d[n] >= s.num_locations()) {
      throw ValidationError("location-index", n, "location index out of range");
    }
  }
  InterferenceGraph g;
  g.neighbors.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      if (s.interferes(i, d[i], j, d[j])) g.neighbors[i].push_back(j);
    }
  }
  return g;
}

std::vector<std::size_t> feasible_moves(const Scenario& s, std::size_t n,
                                        std::size_t d_n) {
  std::vector<std::size_t> out;
  const auto& u = s.user(n);
  for (auto d : u.allowed_locations) {
    if (d != d_n && s.space().distance(d, d_n) <= u.travel_radius) out.push_back(d);
  }
  return out;
}

double sample_rate(const Scenario& s, std::size_t n, std::size_t m,
                   std::size_t d, Rng& rng) {
  switch (s.rate_mode()) {
    case RateMode::Deterministic:
      return s.mean_rate(n, m, d);
    case RateMode::MeanExponential: {
      std::exponential_distribution<double> x(1.0);
      return s.mean_rate(n, m, d) * x(rng);
    }
    case RateMode::ShannonRayleigh: {
      const auto& c = s.config();
      const auto& sh = c.rates.shannon;
      const double gbar = sh.mean_gain[n][m];
      if (gbar <= 0.0) return 0.0;
      std::exponential_distribution<double> g(1.0 / gbar);
      const double h = c.space.scale.empty() ? 1.0 : c.space.scale[d];
      const double snr = s.user(n).zeta * g(rng) / dbm_to_mw(sh.noise_dbm);
      return h * sh.bandwidth_mhz[m] * std::log2(1.0 + snr);
    }
  }
  return 0.0;
}

}  // namespace spatial

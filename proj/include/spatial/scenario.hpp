#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spatial/rng.hpp"

namespace spatial {

using LocationProfile = std::vector<std::size_t>;
using ChannelProfile = std::vector<std::size_t>;

// Two-state primary-user channel. State 1 is idle, 0 is busy.
struct ChannelSpec {
  double epsilon = 0.5;  // busy -> idle
  double xi = 0.5;       // idle -> busy
  double theta = 0.5;    // long-run idle probability, derived on build
};

struct UserSpec {
  double p = 0.5;       // contention probability on an idle channel
  double zeta = 100.0;  // transmit power, mW
  double nu = 100.0;    // per-slot energy budget
  double travel_radius = 0.0;
  double timer_density = 1.0;
  // Locations the user may occupy; empty in a config means "all".
  std::vector<std::size_t> allowed_locations;
  std::size_t initial_location = 0;
  std::size_t initial_channel = 0;
};

struct LocationSpace {
  std::vector<std::vector<double>> distances;
  std::vector<double> scale;  // per-location rate multiplier h_d
  double delta = 1.0;         // interference range, inclusive

  std::size_t size() const { return distances.size(); }
  double distance(std::size_t i, std::size_t j) const {
    return distances[i][j];
  }
};

enum class RateMode { MeanExponential, ShannonRayleigh, Deterministic };

struct ShannonParams {
  std::vector<double> bandwidth_mhz;           // per channel
  double noise_dbm = -100.0;
  std::vector<std::vector<double>> mean_gain;  // [user][channel]
};

struct RateConfig {
  RateMode mode = RateMode::MeanExponential;
  // For the mean-exponential and deterministic modes exactly one of these is
  // filled: full means [user][channel][location], or per user/channel means
  // that get multiplied by the location scale h_d.
  std::vector<std::vector<std::vector<double>>> means;
  std::vector<std::vector<double>> user_channel_means;
  ShannonParams shannon;
};

using Edge = std::pair<std::size_t, std::size_t>;

struct ScenarioConfig {
  std::vector<ChannelSpec> channels;
  std::vector<UserSpec> users;
  LocationSpace space;
  RateConfig rates;
  // Directed pairs; a valid list contains (j,i) for every (i,j). When
  // present, interference no longer depends on locations.
  std::optional<std::vector<Edge>> explicit_edges;
  double p_min = 0.01;
  double p_max = 0.99;
};

double stationary_availability(double epsilon, double xi);

std::uint8_t step_channel_state(std::uint8_t state, const ChannelSpec& spec,
                                Rng& rng);

// E[log2(1 + snr * X)] for X ~ Exp(1), by numerical quadrature.
double expected_log2_one_plus(double mean_snr);

double dbm_to_mw(double dbm);

class Scenario {
 public:
  std::size_t num_users() const { return config_.users.size(); }
  std::size_t num_channels() const { return config_.channels.size(); }
  std::size_t num_locations() const { return config_.space.size(); }

  const ScenarioConfig& config() const { return config_; }
  const ChannelSpec& channel(std::size_t m) const { return config_.channels[m]; }
  const UserSpec& user(std::size_t n) const { return config_.users[n]; }
  const LocationSpace& space() const { return config_.space; }
  RateMode rate_mode() const { return config_.rates.mode; }

  double mean_rate(std::size_t n, std::size_t m, std::size_t d) const {
    return means_[flat(n, m, d)];
  }
  // ln(theta_m * B^n_{m,d} * p_n)
  double log_base(std::size_t n, std::size_t m, std::size_t d) const {
    return log_base_[flat(n, m, d)];
  }
  // ln(1 - p_n), negative
  double log_idle(std::size_t n) const { return log_idle_[n]; }
  // Potential weight -ln(1 - p_n), positive
  double weight(std::size_t n) const { return -log_idle_[n]; }

  bool locations_interfere(std::size_t a, std::size_t b) const {
    return close_[a * num_locations() + b] != 0;
  }
  bool uses_explicit_edges() const { return config_.explicit_edges.has_value(); }

  // Whether users i != j at locations li, lj collide on a shared channel.
  bool interferes(std::size_t i, std::size_t li, std::size_t j,
                  std::size_t lj) const {
    if (i == j) return false;
    if (uses_explicit_edges()) return edges_[i * num_users() + j] != 0;
    return locations_interfere(li, lj);
  }

  bool is_allowed(std::size_t n, std::size_t d) const;

  LocationProfile initial_locations() const;
  ChannelProfile initial_channels() const;

 private:
  friend Scenario build_scenario(ScenarioConfig config);

  std::size_t flat(std::size_t n, std::size_t m, std::size_t d) const {
    return (n * num_channels() + m) * num_locations() + d;
  }

  ScenarioConfig config_;
  std::vector<double> means_;
  std::vector<double> log_base_;
  std::vector<double> log_idle_;
  std::vector<std::uint8_t> close_;
  std::vector<std::uint8_t> edges_;
  std::vector<std::uint8_t> allowed_;
};

// Computes derived quantities without checking invariants. Tests use this to
// build deliberately out-of-range scenarios (e.g. p = 1).
Scenario build_scenario(ScenarioConfig config);

// Checks every invariant, then builds. Throws ValidationError.
Scenario validate_scenario(ScenarioConfig config);

struct InterferenceGraph {
  std::vector<std::vector<std::size_t>> neighbors;  // sorted ascending

  std::size_t num_users() const { return neighbors.size(); }
  std::size_t edge_count() const;  // undirected
  bool has_edge(std::size_t i, std::size_t j) const;
  std::size_t max_degree() const;
};

InterferenceGraph build_interference_graph(const Scenario& s,
                                           std::span<const std::size_t> d);

// Locations user n may move to from d_n in one update: allowed, distinct
// from d_n, and within its travel radius.
std::vector<std::size_t> feasible_moves(const Scenario& s, std::size_t n,
                                        std::size_t d_n);

double sample_rate(const Scenario& s, std::size_t n, std::size_t m,
                   std::size_t d, Rng& rng);

}  // namespace spatial

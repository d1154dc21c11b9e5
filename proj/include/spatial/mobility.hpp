#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatial/game.hpp"
#include "spatial/learning.hpp"
#include "spatial/rng.hpp"
#include "spatial/scenario.hpp"

namespace spatial {

enum class TimerDistribution { Exponential, Uniform, Pareto };

const char* to_string(TimerDistribution t);
TimerDistribution parse_timer_distribution(const std::string& name);

enum class ChannelOracle { ExactArgmax, Learning };

struct MobilityParams {
  double gamma = 1.0;
  TimerDistribution timer = TimerDistribution::Exponential;
  double pareto_shape = 2.5;
  double horizon = 1000.0;
  ChannelOracle oracle = ChannelOracle::ExactArgmax;
  LearningParams learning;  // used by the learning oracle
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool record_events = true;
};

// Probability of staying at the new location:
// 1 / (1 + exp(-w gamma (U_new - U_old))) with w = -ln(1 - p).
double acceptance_probability(double u_old, double u_new, double p, double gamma);

// Rate of the jump d -> d2 with channels a held fixed. Zero on the diagonal
// and when the mover's target is outside its travel-limited set. Throws
// std::invalid_argument if the profiles differ in two or more users.
double transition_rate(const Scenario& s, const LocationProfile& d,
                       const LocationProfile& d2, const ChannelProfile& a,
                       double gamma);

// One draw of a waiting time with the given mean.
double sample_timer(TimerDistribution t, double mean, double pareto_shape, Rng& rng);

struct GibbsDistribution {
  std::vector<LocationProfile> states;  // lexicographic over allowed sets
  std::vector<double> probability;
  std::vector<double> phi;

  // Probability of d, or 0 if d is not a listed state.
  double at(const LocationProfile& d) const;
};

// exp(gamma * phi_i) / sum_j exp(gamma * phi_j), by log-sum-exp.
std::vector<double> gibbs_weights(const std::vector<double>& phi, double gamma);

// Stationary law over all location profiles with channels a fixed.
GibbsDistribution gibbs_distribution(const Scenario& s, const ChannelProfile& a,
                                     double gamma,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

struct MobilityEvent {
  double time = 0.0;
  std::size_t user = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  bool accepted = false;
  double phi = 0.0;
  double total_utility = 0.0;
  ChannelProfile channels;
};

using Occupancy = std::map<LocationProfile, double>;

struct MobilityResult {
  std::vector<MobilityEvent> events;  // first row is the initial state
  LocationProfile final_d;
  ChannelProfile final_a;
  std::size_t event_count = 0;
  Occupancy occupancy;       // time-weighted, whole horizon, normalized
  Occupancy tail_occupancy;  // final half of the horizon, normalized
  double time_average_utility = 0.0;
  double tail_average_utility = 0.0;
  double horizon = 0.0;
};

// Strategic mobility with channels fixed to a.
MobilityResult run_mobility(const Scenario& s, const ChannelProfile& a,
                            const MobilityParams& params, RngStreams& rng);

// Joint algorithm: the same chain, with channels re-chosen for every location
// profile by the configured oracle.
MobilityResult run_joint(const Scenario& s, const MobilityParams& params,
                         RngStreams& rng);

// Total variation distance between an empirical occupancy and a distribution.
double total_variation(const Occupancy& empirical, const GibbsDistribution& target);

// Profile carrying the most weight; smallest profile on ties.
LocationProfile modal_state(const Occupancy& occ);

// Location profiles reachable from `start` via single-user feasible moves.
std::size_t reachable_states(const Scenario& s, const LocationProfile& start,
                             std::uint64_t budget = kDefaultEnumerationBudget);

// argmax over channel profiles of the potential at d; lowest profile on ties.
ChannelProfile potential_maximizing_channels(const Scenario& s,
                                             const LocationProfile& d,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace spatial

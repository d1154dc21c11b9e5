#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spatial/game.hpp"
#include "spatial/rng.hpp"
#include "spatial/scenario.hpp"

namespace spatial {

using MixedProfile = std::vector<std::vector<double>>;  // [user][channel]

// Lower clamp applied to the slot-average throughput before taking its log.
inline constexpr double kThroughputFloor = 1e-6;

// sigma = Z / sum(Z). Throws std::domain_error on a nonpositive entry.
std::vector<double> mixed_strategy(std::span<const double> z);

struct MixedState {
  MixedProfile z;
  MixedProfile sigma;
  std::size_t period = 1;  // T, starting at 1
};

// Z_n(1) = (1/M, ..., 1/M) for every user.
MixedState initial_mixed_state(std::size_t users, std::size_t channels);

struct PeriodEstimate {
  ChannelProfile a;
  std::vector<double> q_hat;  // slot-average throughput
  std::vector<double> u_hat;  // normalized payoff fed to the update
  std::size_t slots = 0;
};

// Busy/idle state of every channel, shared by all locations.
using ChannelStates = std::vector<std::uint8_t>;

ChannelStates stationary_channel_states(const Scenario& s, Rng& rng);

// Runs K slots with channels held fixed. Each slot first advances every
// channel one Markov step, then users contend with probability p_n on idle
// channels; a contender succeeds when no interfering same-channel neighbor
// contends and earns a sampled rate. u_hat = max(floor, norm(ln max(q, 1e-6))).
PeriodEstimate simulate_period(const Scenario& s, std::span<const std::size_t> d,
                               const ChannelProfile& a, std::size_t slots,
                               const UtilityNormalization& norm,
                               ChannelStates& states, RngStreams& rng);

// Z(T+1) = sigma(T) + mu * U * 1{a = m}; sigma(T+1) = Z(T+1) / sum.
// Throws std::domain_error when a perception turns nonpositive.
void update_perceptions(MixedState& state, const PeriodEstimate& est, double mu);

struct LearningParams {
  std::size_t slots_per_period = 100;
  std::size_t periods = 300;
  double mu_scale = 1.0;  // mu_T = mu_scale / T
  double floor = 0.05;
  double convergence_threshold = 0.99;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool record_sigma = false;
};

struct LearningRow {
  std::size_t period = 0;
  ChannelProfile a;
  std::vector<double> u_hat;
  MixedProfile sigma;  // empty unless record_sigma
  double phi = 0.0;
};

struct LearningResult {
  std::vector<LearningRow> trace;
  ChannelProfile final_channels;  // per-user argmax of sigma, lowest index on ties
  bool converged = false;
  MixedProfile final_sigma;
  UtilityNormalization norm;
};

LearningResult run_learning(const Scenario& s, const LocationProfile& d,
                            const LearningParams& params, RngStreams& rng);

// Exact V[n][m] = E[U_n | a_n = m] with opponents drawn from sigma, by
// enumerating all channel profiles. Throws BudgetExceeded beyond M^N > budget.
MixedProfile expected_payoffs(const Scenario& s, std::span<const std::size_t> d,
                              const MixedProfile& sigma,
                              std::uint64_t budget = 1'000'000);

struct ExpectedPotential {
  double value = 0.0;      // L
  MixedProfile conditional;  // L^n_i: user n pinned to channel i
};

ExpectedPotential expected_potential(const Scenario& s,
                                     std::span<const std::size_t> d,
                                     const MixedProfile& sigma,
                                     std::uint64_t budget = 1'000'000);

// d sigma^n_m / dT = sigma^n_m (V^n_m - sum_i sigma^n_i V^n_i).
MixedProfile replicator_field(const Scenario& s, std::span<const std::size_t> d,
                              const MixedProfile& sigma,
                              std::uint64_t budget = 1'000'000);

// One classical RK4 step, then negative entries clamped and each row
// renormalized. Throws std::logic_error if a row drifted by more than 1e-9.
MixedProfile replicator_ode_step(const Scenario& s,
                                 std::span<const std::size_t> d,
                                 const MixedProfile& sigma, double h = 0.01,
                                 std::uint64_t budget = 1'000'000);

}  // namespace spatial

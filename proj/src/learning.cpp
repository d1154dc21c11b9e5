#include "spatial/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spatial {

std::vector<double> mixed_strategy(std::span<const double> z) {
  double total = 0.0;
  for (double v : z) {
    if (!(v > 0.0)) throw std::domain_error("perception values must be positive");
    total += v;
  }
  std::vector<double> sigma(z.begin(), z.end());
  for (double& v : sigma) v /= total;
  return sigma;
}

MixedState initial_mixed_state(std::size_t users, std::size_t channels) {
  MixedState st;
  const double w = 1.0 / static_cast<double>(channels);
  st.z.assign(users, std::vector<double>(channels, w));
  st.sigma = st.z;
  for (auto& row : st.sigma) row = mixed_strategy(row);
  return st;
}

ChannelStates stationary_channel_states(const Scenario& s, Rng& rng) {
  ChannelStates states(s.num_channels());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t m = 0; m < s.num_channels(); ++m) {
    states[m] = u(rng) < s.channel(m).theta ? 1 : 0;
  }
  return states;
}

PeriodEstimate simulate_period(const Scenario& s, std::span<const std::size_t> d,
                               const ChannelProfile& a, std::size_t slots,
                               const UtilityNormalization& norm,
                               ChannelStates& states, RngStreams& rng) {
  if (slots == 0) throw std::invalid_argument("a period needs at least one slot");
  const std::size_t N = s.num_users();
  const auto g = build_interference_graph(s, d);
  std::vector<std::vector<std::size_t>> rivals(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (auto i : g.neighbors[n]) {
      if (a[i] == a[n]) rivals[n].push_back(i);
    }
  }

  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> sum(N, 0.0);
  std::vector<std::uint8_t> contends(N, 0);
  for (std::size_t t = 0; t < slots; ++t) {
    for (std::size_t m = 0; m < states.size(); ++m) {
      states[m] = step_channel_state(states[m], s.channel(m), rng.channel_states);
    }
    for (std::size_t n = 0; n < N; ++n) {
      const bool draw = u(rng.contention) < s.user(n).p;
      contends[n] = (draw && states[a[n]] == 1) ? 1 : 0;
    }
    for (std::size_t n = 0; n < N; ++n) {
      if (!contends[n]) continue;
      const bool clear = std::none_of(rivals[n].begin(), rivals[n].end(),
                                      [&](std::size_t i) { return contends[i] != 0; });
      if (clear) sum[n] += sample_rate(s, n, a[n], d[n], rng.rates);
    }
  }

  PeriodEstimate est;
  est.a = a;
  est.slots = slots;
  est.q_hat.resize(N);
  est.u_hat.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    est.q_hat[n] = sum[n] / static_cast<double>(slots);
    const double u_raw = std::log(std::max(est.q_hat[n], kThroughputFloor));
    est.u_hat[n] = std::max(norm.floor, norm.apply(u_raw));
  }
  return est;
}

void update_perceptions(MixedState& state, const PeriodEstimate& est, double mu) {
  for (std::size_t n = 0; n < state.sigma.size(); ++n) {
    auto& z = state.z[n];
    for (std::size_t m = 0; m < z.size(); ++m) {
      z[m] = state.sigma[n][m] + (est.a[n] == m ? mu * est.u_hat[n] : 0.0);
    }
    state.sigma[n] = mixed_strategy(z);
  }
  ++state.period;
}

namespace {

std::size_t sample_channel(const std::vector<double>& sigma, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(sigma.begin(), sigma.end());
  return pick(rng);
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

LearningResult run_learning(const Scenario& s, const LocationProfile& d,
                            const LearningParams& params, RngStreams& rng) {
  const std::size_t N = s.num_users();
  const std::size_t M = s.num_channels();
  LearningResult result;
  Profile base{d, ChannelProfile(N, 0)};
  result.norm = utility_normalization(s, DeviationSpace::Channels, base,
                                      params.budget, params.floor);

  MixedState state = initial_mixed_state(N, M);
  ChannelStates channels = stationary_channel_states(s, rng.channel_states);
  result.trace.reserve(params.periods);
  for (std::size_t T = 1; T <= params.periods; ++T) {
    ChannelProfile a(N);
    for (std::size_t n = 0; n < N; ++n) a[n] = sample_channel(state.sigma[n], rng.strategy);
    const PeriodEstimate est =
        simulate_period(s, d, a, params.slots_per_period, result.norm, channels, rng);

    LearningRow row;
    row.period = T;
    row.a = a;
    row.u_hat = est.u_hat;
    if (params.record_sigma) row.sigma = state.sigma;
    row.phi = potential(s, Profile{d, a});
    result.trace.push_back(std::move(row));

    update_perceptions(state, est, params.mu_scale / static_cast<double>(T));
  }

  result.final_sigma = state.sigma;
  result.final_channels.resize(N);
  result.converged = true;
  for (std::size_t n = 0; n < N; ++n) {
    result.final_channels[n] = argmax(state.sigma[n]);
    if (state.sigma[n][result.final_channels[n]] < params.convergence_threshold) {
      result.converged = false;
    }
  }
  return result;
}

namespace {

void check_ode_budget(const Scenario& s, std::uint64_t budget) {
  const long double size = search_space_size(s, DeviationSpace::Channels);
  if (size > static_cast<long double>(budget)) {
    throw BudgetExceeded("channel profiles for expected payoffs", size, budget);
  }
}

// Visits every channel profile with, per user n, the probability that all
// other users play as in the profile.
template <typename Visit>
void for_each_weighted(const Scenario& s, std::span<const std::size_t> d,
                       const MixedProfile& sigma, std::uint64_t budget,
                       Visit&& visit) {
  check_ode_budget(s, budget);
  const std::size_t N = s.num_users();
  Profile base{LocationProfile(d.begin(), d.end()), ChannelProfile(N, 0)};
  std::vector<double> prefix(N + 1), suffix(N + 1), others(N);
  for_each_profile(s, DeviationSpace::Channels, base, budget, [&](const Profile& p) {
    prefix[0] = 1.0;
    for (std::size_t i = 0; i < N; ++i) prefix[i + 1] = prefix[i] * sigma[i][p.a[i]];
    suffix[N] = 1.0;
    for (std::size_t i = N; i > 0; --i) suffix[i - 1] = suffix[i] * sigma[i - 1][p.a[i - 1]];
    for (std::size_t n = 0; n < N; ++n) others[n] = prefix[n] * suffix[n + 1];
    visit(p, prefix[N], others);
  });
}

}  // namespace

MixedProfile expected_payoffs(const Scenario& s, std::span<const std::size_t> d,
                              const MixedProfile& sigma, std::uint64_t budget) {
  const std::size_t N = s.num_users();
  MixedProfile v(N, std::vector<double>(s.num_channels(), 0.0));
  for_each_weighted(s, d, sigma, budget,
                    [&](const Profile& p, double, const std::vector<double>& others) {
                      for (std::size_t n = 0; n < N; ++n) {
                        if (others[n] != 0.0) v[n][p.a[n]] += others[n] * utility(s, p, n);
                      }
                    });
  return v;
}

ExpectedPotential expected_potential(const Scenario& s,
                                     std::span<const std::size_t> d,
                                     const MixedProfile& sigma,
                                     std::uint64_t budget) {
  const std::size_t N = s.num_users();
  ExpectedPotential out;
  out.conditional.assign(N, std::vector<double>(s.num_channels(), 0.0));
  for_each_weighted(s, d, sigma, budget,
                    [&](const Profile& p, double all, const std::vector<double>& others) {
                      const double phi = potential(s, p);
                      out.value += all * phi;
                      for (std::size_t n = 0; n < N; ++n) {
                        out.conditional[n][p.a[n]] += others[n] * phi;
                      }
                    });
  return out;
}

MixedProfile replicator_field(const Scenario& s, std::span<const std::size_t> d,
                              const MixedProfile& sigma, std::uint64_t budget) {
  const MixedProfile v = expected_payoffs(s, d, sigma, budget);
  MixedProfile f = sigma;
  for (std::size_t n = 0; n < sigma.size(); ++n) {
    double mean = 0.0;
    for (std::size_t m = 0; m < sigma[n].size(); ++m) mean += sigma[n][m] * v[n][m];
    for (std::size_t m = 0; m < sigma[n].size(); ++m) {
      f[n][m] = sigma[n][m] * (v[n][m] - mean);
    }
  }
  return f;
}

namespace {

MixedProfile axpy(const MixedProfile& x, double h, const MixedProfile& k) {
  MixedProfile out = x;
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t m = 0; m < x[n].size(); ++m) out[n][m] += h * k[n][m];
  }
  return out;
}

}  // namespace

MixedProfile replicator_ode_step(const Scenario& s,
                                 std::span<const std::size_t> d,
                                 const MixedProfile& sigma, double h,
                                 std::uint64_t budget) {
  const MixedProfile k1 = replicator_field(s, d, sigma, budget);
  const MixedProfile k2 = replicator_field(s, d, axpy(sigma, h / 2, k1), budget);
  const MixedProfile k3 = replicator_field(s, d, axpy(sigma, h / 2, k2), budget);
  const MixedProfile k4 = replicator_field(s, d, axpy(sigma, h, k3), budget);
  MixedProfile next = sigma;
  for (std::size_t n = 0; n < sigma.size(); ++n) {
    double total = 0.0;
    for (std::size_t m = 0; m < sigma[n].size(); ++m) {
      double v = sigma[n][m] +
                 h / 6.0 * (k1[n][m] + 2.0 * k2[n][m] + 2.0 * k3[n][m] + k4[n][m]);
      v = std::max(v, 0.0);
      next[n][m] = v;
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::logic_error("replicator step left the simplex");
    }
    for (double& v : next[n]) v /= total;
  }
  return next;
}

}  // namespace spatial

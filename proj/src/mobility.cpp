#include "spatial/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace spatial {

const char* to_string(TimerDistribution t) {
  switch (t) {
    case TimerDistribution::Exponential: return "exp";
    case TimerDistribution::Uniform: return "uniform";
    case TimerDistribution::Pareto: return "pareto";
  }
  return "?";
}

TimerDistribution parse_timer_distribution(const std::string& name) {
  if (name == "exp" || name == "exponential") return TimerDistribution::Exponential;
  if (name == "uniform") return TimerDistribution::Uniform;
  if (name == "pareto" || name == "power-law") return TimerDistribution::Pareto;
  throw ConfigError("unknown timer distribution: " + name);
}

double acceptance_probability(double u_old, double u_new, double p, double gamma) {
  const double x = -std::log1p(-p) * gamma * (u_new - u_old);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double transition_rate(const Scenario& s, const LocationProfile& d,
                       const LocationProfile& d2, const ChannelProfile& a,
                       double gamma) {
  std::optional<std::size_t> mover;
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (d[n] == d2[n]) continue;
    if (mover) throw std::invalid_argument("profiles differ in more than one user");
    mover = n;
  }
  if (!mover) return 0.0;
  const std::size_t n = *mover;
  const auto moves = feasible_moves(s, n, d[n]);
  if (std::find(moves.begin(), moves.end(), d2[n]) == moves.end()) return 0.0;
  const double u_old = utility(s, Profile{d, a}, n);
  const double u_new = utility(s, Profile{d2, a}, n);
  return s.user(n).timer_density * acceptance_probability(u_old, u_new, s.user(n).p, gamma);
}

double sample_timer(TimerDistribution t, double mean, double pareto_shape, Rng& rng) {
  switch (t) {
    case TimerDistribution::Exponential:
      return std::exponential_distribution<double>(1.0 / mean)(rng);
    case TimerDistribution::Uniform:
      return std::uniform_real_distribution<double>(0.0, 2.0 * mean)(rng);
    case TimerDistribution::Pareto: {
      if (!(pareto_shape > 1.0)) throw ConfigError("pareto shape must exceed 1");
      const double scale = mean * (pareto_shape - 1.0) / pareto_shape;
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      return scale * std::pow(1.0 - u, -1.0 / pareto_shape);
    }
  }
  return mean;
}

double GibbsDistribution::at(const LocationProfile& d) const {
  const auto it = std::lower_bound(states.begin(), states.end(), d);
  if (it == states.end() || *it != d) return 0.0;
  return probability[static_cast<std::size_t>(it - states.begin())];
}

std::vector<double> gibbs_weights(const std::vector<double>& phi, double gamma) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : phi) top = std::max(top, gamma * v);
  std::vector<double> w(phi.size());
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    w[i] = std::exp(gamma * phi[i] - top);
    total += w[i];
  }
  for (double& v : w) v /= total;
  return w;
}

GibbsDistribution gibbs_distribution(const Scenario& s, const ChannelProfile& a,
                                     double gamma, std::uint64_t budget) {
  GibbsDistribution g;
  for_each_profile(s, DeviationSpace::Locations, Profile{s.initial_locations(), a},
                   budget, [&](const Profile& p) {
                     g.states.push_back(p.d);
                     g.phi.push_back(potential(s, p));
                   });
  g.probability = gibbs_weights(g.phi, gamma);
  return g;
}

ChannelProfile potential_maximizing_channels(const Scenario& s,
                                             const LocationProfile& d,
                                             std::uint64_t budget) {
  Profile base{d, ChannelProfile(s.num_users(), 0)};
  return potential_maximum(s, DeviationSpace::Channels, base, budget).profile.a;
}

namespace {

using ChannelFn = std::function<ChannelProfile(const LocationProfile&)>;

MobilityResult simulate_chain(const Scenario& s, const MobilityParams& params,
                              RngStreams& rng, const ChannelFn& channels_for) {
  const std::size_t N = s.num_users();
  const double inf = std::numeric_limits<double>::infinity();
  const double tail_start = params.horizon / 2.0;

  MobilityResult r;
  r.horizon = params.horizon;
  LocationProfile d = s.initial_locations();
  ChannelProfile a = channels_for(d);
  double phi = potential(s, Profile{d, a});
  double total = total_utility(s, Profile{d, a});

  std::vector<double> expiry(N, inf);
  auto arm = [&](std::size_t n, double now) {
    const auto moves = feasible_moves(s, n, d[n]);
    if (moves.empty()) {
      expiry[n] = inf;
      return;
    }
    const double mean = 1.0 / (s.user(n).timer_density * static_cast<double>(moves.size()));
    expiry[n] = now + sample_timer(params.timer, mean, params.pareto_shape, rng.timers);
  };
  for (std::size_t n = 0; n < N; ++n) arm(n, 0.0);

  if (params.record_events) {
    const std::size_t d0 = d.empty() ? 0 : d[0];
    r.events.push_back({0.0, 0, d0, d0, false, phi, total, a});
  }

  double now = 0.0;
  double area = 0.0;
  double tail_area = 0.0;
  auto hold = [&](double until) {
    const double dt = until - now;
    if (dt <= 0.0) return;
    r.occupancy[d] += dt;
    area += dt * total;
    const double lo = std::max(now, tail_start);
    if (until > lo) {
      r.tail_occupancy[d] += until - lo;
      tail_area += (until - lo) * total;
    }
    now = until;
  };

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    std::size_t n = N;
    double next = inf;
    for (std::size_t i = 0; i < N; ++i) {
      if (expiry[i] < next) {
        next = expiry[i];
        n = i;
      }
    }
    if (n == N || next > params.horizon) break;
    hold(next);

    const auto moves = feasible_moves(s, n, d[n]);
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    LocationProfile d_new = d;
    d_new[n] = moves[pick(rng.candidates)];
    ChannelProfile a_new = channels_for(d_new);
    const double u_old = utility(s, Profile{d, a}, n);
    const double u_new = utility(s, Profile{d_new, a_new}, n);
    const double acc = acceptance_probability(u_old, u_new, s.user(n).p, params.gamma);
    const bool accepted = coin(rng.acceptance) < acc;
    const std::size_t from = d[n];
    const std::size_t to = d_new[n];
    if (accepted) {
      d = std::move(d_new);
      a = std::move(a_new);
      phi = potential(s, Profile{d, a});
      total = total_utility(s, Profile{d, a});
    }
    arm(n, now);
    ++r.event_count;
    if (params.record_events) {
      r.events.push_back({now, n, from, to, accepted, phi, total, a});
    }
  }
  hold(params.horizon);

  if (params.horizon > 0.0) {
    for (auto& [state, w] : r.occupancy) w /= params.horizon;
    for (auto& [state, w] : r.tail_occupancy) w /= params.horizon - tail_start;
    r.time_average_utility = area / params.horizon;
    r.tail_average_utility = tail_area / (params.horizon - tail_start);
  } else {
    r.occupancy[d] = 1.0;
    r.tail_occupancy[d] = 1.0;
    r.time_average_utility = total;
    r.tail_average_utility = total;
  }
  r.final_d = d;
  r.final_a = a;
  return r;
}

}  // namespace

MobilityResult run_mobility(const Scenario& s, const ChannelProfile& a,
                            const MobilityParams& params, RngStreams& rng) {
  return simulate_chain(s, params, rng, [&](const LocationProfile&) { return a; });
}

MobilityResult run_joint(const Scenario& s, const MobilityParams& params,
                         RngStreams& rng) {
  if (params.oracle == ChannelOracle::ExactArgmax) {
    std::map<LocationProfile, ChannelProfile> cache;
    return simulate_chain(s, params, rng, [&](const LocationProfile& d) {
      auto it = cache.find(d);
      if (it == cache.end()) {
        it = cache.emplace(d, potential_maximizing_channels(s, d, params.budget)).first;
      }
      return it->second;
    });
  }
  std::uint64_t salt = 0;
  return simulate_chain(s, params, rng, [&](const LocationProfile& d) {
    RngStreams sub = rng.child(++salt);
    return run_learning(s, d, params.learning, sub).final_channels;
  });
}

double total_variation(const Occupancy& empirical, const GibbsDistribution& target) {
  double tv = 0.0;
  for (std::size_t i = 0; i < target.states.size(); ++i) {
    const auto it = empirical.find(target.states[i]);
    const double e = it == empirical.end() ? 0.0 : it->second;
    tv += std::abs(e - target.probability[i]);
  }
  for (const auto& [state, w] : empirical) {
    if (!std::binary_search(target.states.begin(), target.states.end(), state)) {
      tv += w;
    }
  }
  return tv / 2.0;
}

LocationProfile modal_state(const Occupancy& occ) {
  LocationProfile best;
  double w = -1.0;
  for (const auto& [state, v] : occ) {
    if (v > w) {
      w = v;
      best = state;
    }
  }
  return best;
}

std::size_t reachable_states(const Scenario& s, const LocationProfile& start,
                             std::uint64_t budget) {
  const long double size = search_space_size(s, DeviationSpace::Locations);
  if (size > static_cast<long double>(budget)) {
    throw BudgetExceeded("location profiles for reachability", size, budget);
  }
  std::set<LocationProfile> seen{start};
  std::deque<LocationProfile> queue{start};
  while (!queue.empty()) {
    const LocationProfile d = queue.front();
    queue.pop_front();
    for (std::size_t n = 0; n < d.size(); ++n) {
      for (auto l : feasible_moves(s, n, d[n])) {
        LocationProfile next = d;
        next[n] = l;
        if (seen.insert(next).second) queue.push_back(std::move(next));
      }
    }
  }
  return seen.size();
}

}  // namespace spatial

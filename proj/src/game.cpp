#include "spatial/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spatial {

Profile initial_profile(const Scenario& s) {
  return Profile{s.initial_locations(), s.initial_channels()};
}

const char* to_string(DeviationSpace space) {
  switch (space) {
    case DeviationSpace::Channels: return "channels";
    case DeviationSpace::Locations: return "locations";
    case DeviationSpace::Joint: return "joint";
  }
  return "?";
}

namespace {

// Utility of user n placed at (loc, ch) with everybody else as in prof.
double utility_at(const Scenario& s, const Profile& prof, std::size_t n,
                  std::size_t loc, std::size_t ch) {
  double u = s.log_base(n, ch, loc);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (prof.a[i] == ch && s.interferes(n, loc, i, prof.d[i])) u += s.log_idle(i);
  }
  return u;
}

}  // namespace

double expected_throughput(const Scenario& s, const Profile& prof,
                           std::size_t n) {
  const std::size_t m = prof.a[n];
  const std::size_t d = prof.d[n];
  double q = s.channel(m).theta * s.mean_rate(n, m, d) * s.user(n).p;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (prof.a[i] == m && s.interferes(n, d, i, prof.d[i])) q *= 1.0 - s.user(i).p;
  }
  return q;
}

double utility(const Scenario& s, const Profile& prof, std::size_t n) {
  return utility_at(s, prof, n, prof.d[n], prof.a[n]);
}

double deviation_utility(const Scenario& s, const Profile& prof, std::size_t n,
                         Action action) {
  return utility_at(s, prof, n, action.location, action.channel);
}

double congestion_level(const Scenario& s, const Profile& prof, std::size_t n) {
  return utility(s, prof, n) - s.log_base(n, prof.a[n], prof.d[n]);
}

double total_utility(const Scenario& s, const Profile& prof) {
  double total = 0.0;
  for (std::size_t n = 0; n < prof.size(); ++n) total += utility(s, prof, n);
  return total;
}

double potential(const Scenario& s, const Profile& prof) {
  double phi = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    double shared = 0.0;
    for (std::size_t j = 0; j < prof.size(); ++j) {
      if (prof.a[j] == prof.a[i] && s.interferes(i, prof.d[i], j, prof.d[j])) {
        shared += s.log_idle(j);
      }
    }
    phi += s.weight(i) * (0.5 * shared + s.log_base(i, prof.a[i], prof.d[i]));
  }
  return phi;
}

std::vector<Action> candidate_actions(const Scenario& s, const Profile& prof,
                                      std::size_t n, DeviationSpace space) {
  std::vector<Action> out;
  const std::size_t M = s.num_channels();
  switch (space) {
    case DeviationSpace::Channels:
      for (std::size_t m = 0; m < M; ++m) out.push_back({prof.d[n], m});
      break;
    case DeviationSpace::Locations:
      for (auto l : s.user(n).allowed_locations) out.push_back({l, prof.a[n]});
      break;
    case DeviationSpace::Joint:
      for (auto l : s.user(n).allowed_locations) {
        for (std::size_t m = 0; m < M; ++m) out.push_back({l, m});
      }
      break;
  }
  return out;
}

Action best_response(const Scenario& s, const Profile& prof, std::size_t n,
                     DeviationSpace space) {
  const auto candidates = candidate_actions(s, prof, n, space);
  Action best = candidates.front();
  double best_u = deviation_utility(s, prof, n, best);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double u = deviation_utility(s, prof, n, candidates[k]);
    if (u > best_u + kImprovementTolerance) {
      best = candidates[k];
      best_u = u;
    }
  }
  return best;
}

namespace {

bool user_can_improve(const Scenario& s, const Profile& prof, std::size_t n,
                      DeviationSpace space) {
  const double current = utility(s, prof, n);
  for (const auto& act : candidate_actions(s, prof, n, space)) {
    if (deviation_utility(s, prof, n, act) > current + kImprovementTolerance) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_nash(const Scenario& s, const Profile& prof, DeviationSpace space) {
  for (std::size_t n = 0; n < prof.size(); ++n) {
    if (user_can_improve(s, prof, n, space)) return false;
  }
  return true;
}

long double search_space_size(const Scenario& s, DeviationSpace space) {
  long double size = 1.0L;
  for (std::size_t n = 0; n < s.num_users(); ++n) {
    const std::size_t locs = s.user(n).allowed_locations.size();
    switch (space) {
      case DeviationSpace::Channels:
        size = checked_space_size(size, s.num_channels());
        break;
      case DeviationSpace::Locations:
        size = checked_space_size(size, locs);
        break;
      case DeviationSpace::Joint:
        size = checked_space_size(size, locs * s.num_channels());
        break;
    }
  }
  return size;
}

BetterResponseResult better_response_path(const Scenario& s, Profile start,
                                          DeviationSpace space,
                                          UpdateOrder order, Rng& rng) {
  BetterResponseResult result;
  result.terminal = std::move(start);
  Profile& prof = result.terminal;
  const std::size_t N = prof.size();
  const long double step_limit = search_space_size(s, space);
  double phi = potential(s, prof);
  result.potentials.push_back(phi);

  auto improving_actions = [&](std::size_t n) {
    std::vector<Action> better;
    const double current = utility(s, prof, n);
    for (const auto& act : candidate_actions(s, prof, n, space)) {
      if (deviation_utility(s, prof, n, act) > current + kImprovementTolerance) {
        better.push_back(act);
      }
    }
    return better;
  };

  auto apply = [&](std::size_t n, const std::vector<Action>& better) {
    std::uniform_int_distribution<std::size_t> pick(0, better.size() - 1);
    const Action act = better[pick(rng)];
    prof.d[n] = act.location;
    prof.a[n] = act.channel;
    const double next = potential(s, prof);
    if (!(next > phi - 1e-9)) {
      throw std::logic_error("potential decreased along a better-response step");
    }
    phi = next;
    result.potentials.push_back(phi);
    if (static_cast<long double>(++result.steps) > step_limit) {
      throw std::logic_error("better-response walk exceeded the search space size");
    }
  };

  if (order == UpdateOrder::RoundRobin) {
    std::size_t idle = 0;
    for (std::size_t n = 0; idle < N; n = (n + 1) % N) {
      const auto better = improving_actions(n);
      if (better.empty()) {
        ++idle;
        continue;
      }
      idle = 0;
      apply(n, better);
    }
  } else {
    for (;;) {
      std::vector<std::size_t> movers;
      for (std::size_t n = 0; n < N; ++n) {
        if (user_can_improve(s, prof, n, space)) movers.push_back(n);
      }
      if (movers.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, movers.size() - 1);
      const std::size_t n = movers[pick(rng)];
      apply(n, improving_actions(n));
    }
  }
  return result;
}

void for_each_profile(const Scenario& s, DeviationSpace space,
                      const Profile& base, std::uint64_t budget,
                      const std::function<void(const Profile&)>& visit) {
  const long double size = search_space_size(s, space);
  if (size > static_cast<long double>(budget)) {
    throw BudgetExceeded(std::string("profile space (") + to_string(space) + ")",
                         size, budget);
  }
  const std::size_t N = s.num_users();
  const bool vary_d = space != DeviationSpace::Channels;
  const bool vary_a = space != DeviationSpace::Locations;

  // Digits ordered [d_0..d_{N-1}, a_0..a_{N-1}] over the varying coordinates;
  // incrementing from the back yields lexicographic (d, a) order.
  struct Digit {
    std::size_t user;
    bool is_location;
    std::size_t radix;
    std::size_t value;
  };
  std::vector<Digit> digits;
  Profile prof = base;
  if (vary_d) {
    for (std::size_t n = 0; n < N; ++n) {
      digits.push_back({n, true, s.user(n).allowed_locations.size(), 0});
      prof.d[n] = s.user(n).allowed_locations[0];
    }
  }
  if (vary_a) {
    for (std::size_t n = 0; n < N; ++n) {
      digits.push_back({n, false, s.num_channels(), 0});
      prof.a[n] = 0;
    }
  }

  for (;;) {
    visit(prof);
    std::size_t k = digits.size();
    while (k > 0) {
      auto& dg = digits[k - 1];
      dg.value = (dg.value + 1) % dg.radix;
      if (dg.is_location) {
        prof.d[dg.user] = s.user(dg.user).allowed_locations[dg.value];
      } else {
        prof.a[dg.user] = dg.value;
      }
      if (dg.value != 0) break;
      --k;
    }
    if (k == 0) return;
  }
}

std::vector<Profile> enumerate_nash(const Scenario& s, DeviationSpace space,
                                    const Profile& base, std::uint64_t budget) {
  std::vector<Profile> out;
  for_each_profile(s, space, base, budget, [&](const Profile& p) {
    if (is_nash(s, p, space)) out.push_back(p);
  });
  return out;
}

namespace {

Optimum maximize(const Scenario& s, DeviationSpace space, const Profile& base,
                 std::uint64_t budget,
                 double (*objective)(const Scenario&, const Profile&)) {
  Optimum best{base, -std::numeric_limits<double>::infinity()};
  for_each_profile(s, space, base, budget, [&](const Profile& p) {
    const double v = objective(s, p);
    if (v > best.value) best = Optimum{p, v};
  });
  return best;
}

}  // namespace

Optimum centralized_optimum(const Scenario& s, DeviationSpace space,
                            const Profile& base, std::uint64_t budget) {
  return maximize(s, space, base, budget, &total_utility);
}

Optimum potential_maximum(const Scenario& s, DeviationSpace space,
                          const Profile& base, std::uint64_t budget) {
  return maximize(s, space, base, budget, &potential);
}

namespace {

// Exact per-user channel-game utility range at a fixed location profile.
void channel_range_at(const Scenario& s, const LocationProfile& d, double& lo,
                      double& hi) {
  const auto g = build_interference_graph(s, d);
  const std::size_t M = s.num_channels();
  for (std::size_t n = 0; n < s.num_users(); ++n) {
    double all_neighbors = 0.0;
    for (auto i : g.neighbors[n]) all_neighbors += s.log_idle(i);
    double base_min = std::numeric_limits<double>::infinity();
    double base_max = -base_min;
    for (std::size_t m = 0; m < M; ++m) {
      base_min = std::min(base_min, s.log_base(n, m, d[n]));
      base_max = std::max(base_max, s.log_base(n, m, d[n]));
    }
    // Worst: every neighbor piles onto the user's channel. Best: every
    // neighbor elsewhere, which needs a second channel.
    lo = std::min(lo, base_min + all_neighbors);
    hi = std::max(hi, M > 1 ? base_max : base_max + all_neighbors);
  }
}

}  // namespace

UtilityNormalization utility_normalization(const Scenario& s,
                                           DeviationSpace space,
                                           const Profile& base,
                                           std::uint64_t budget, double floor) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (space == DeviationSpace::Channels) {
    channel_range_at(s, base.d, lo, hi);
  } else if (search_space_size(s, DeviationSpace::Locations) <=
             static_cast<long double>(budget)) {
    for_each_profile(s, DeviationSpace::Locations, base, budget,
                     [&](const Profile& p) {
                       if (space == DeviationSpace::Joint) {
                         channel_range_at(s, p.d, lo, hi);
                       } else {
                         for (std::size_t n = 0; n < p.size(); ++n) {
                           const double u = utility(s, p, n);
                           lo = std::min(lo, u);
                           hi = std::max(hi, u);
                         }
                       }
                     });
  } else {
    double all_idle = 0.0;
    for (std::size_t n = 0; n < s.num_users(); ++n) all_idle += s.log_idle(n);
    for (std::size_t n = 0; n < s.num_users(); ++n) {
      for (std::size_t m = 0; m < s.num_channels(); ++m) {
        for (auto d : s.user(n).allowed_locations) {
          const double b = s.log_base(n, m, d);
          lo = std::min(lo, b + all_idle - s.log_idle(n));
          hi = std::max(hi, b);
        }
      }
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  return UtilityNormalization{lo, hi, floor};
}

}  // namespace spatial

#pragma once

// Reference computations written independently of the library internals:
// they read only the raw ScenarioConfig and recompute everything from first
// principles with plain loops.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "spatial/scenario.hpp"

namespace oracle {

using spatial::ScenarioConfig;

inline double theta(const ScenarioConfig& c, std::size_t m) {
  return c.channels[m].epsilon / (c.channels[m].epsilon + c.channels[m].xi);
}

inline double mean_rate(const ScenarioConfig& c, std::size_t n, std::size_t m,
                        std::size_t d) {
  if (!c.rates.means.empty()) return c.rates.means[n][m][d];
  const double h = c.space.scale.empty() ? 1.0 : c.space.scale[d];
  return h * c.rates.user_channel_means[n][m];
}

inline bool conflict(const ScenarioConfig& c, std::size_t i, std::size_t li,
                     std::size_t j, std::size_t lj) {
  if (i == j) return false;
  if (c.explicit_edges) {
    for (const auto& e : *c.explicit_edges) {
      if (e.first == i && e.second == j) return true;
    }
    return false;
  }
  return c.space.distances[li][lj] <= c.space.delta;
}

// theta * B * p * prod(1 - p_i) over same-channel conflicting users.
inline double throughput(const ScenarioConfig& c, const std::vector<std::size_t>& d,
                         const std::vector<std::size_t>& a, std::size_t n) {
  double q = theta(c, a[n]) * mean_rate(c, n, a[n], d[n]) * c.users[n].p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == a[n] && conflict(c, n, d[n], i, d[i])) q *= 1.0 - c.users[i].p;
  }
  return q;
}

inline double utility(const ScenarioConfig& c, const std::vector<std::size_t>& d,
                      const std::vector<std::size_t>& a, std::size_t n) {
  return std::log(throughput(c, d, a, n));
}

// Potential written pairwise: sum_i w_i ln(theta B p)_i plus, per unordered
// conflicting same-channel pair, w_i ln(1-p_j) (which equals w_j ln(1-p_i)).
inline double potential(const ScenarioConfig& c, const std::vector<std::size_t>& d,
                        const std::vector<std::size_t>& a) {
  double phi = 0.0;
  const std::size_t N = a.size();
  for (std::size_t i = 0; i < N; ++i) {
    const double wi = -std::log(1.0 - c.users[i].p);
    phi += wi * std::log(theta(c, a[i]) * mean_rate(c, i, a[i], d[i]) * c.users[i].p);
    for (std::size_t j = i + 1; j < N; ++j) {
      if (a[i] == a[j] && conflict(c, i, d[i], j, d[j])) {
        phi += wi * std::log(1.0 - c.users[j].p);
      }
    }
  }
  return phi;
}

// Closed form of E[log2(1 + s X)], X ~ Exp(1): e^{1/s} E1(1/s) / ln 2.
inline double expected_log2_closed_form(double s) {
  const double x = 1.0 / s;
  // E1 by its series for small x and continued fraction otherwise.
  double e1;
  if (x < 1.0) {
    const double euler = 0.57721566490153286061;
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      sum += term / k;
    }
    e1 = -euler - std::log(x) - sum;
    return std::exp(x) * e1 / std::log(2.0);
  }
  // Lentz continued fraction for e^x E1(x).
  double b = x + 1.0;
  double cc = 1e300;
  double dd = 1.0 / b;
  double h = dd;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    dd = 1.0 / (an * dd + b);
    cc = b + an / cc;
    const double del = cc * dd;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h / std::log(2.0);
}

struct InstanceShape {
  std::size_t max_users = 6;
  std::size_t max_channels = 3;
  std::size_t max_locations = 4;
  double p_lo = 0.05;
  double p_hi = 0.9;
  double explicit_edge_chance = 0.2;
};

// Random valid configuration. Rate means are drawn so that ln(theta B p)
// covers both signs.
inline ScenarioConfig random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  std::uniform_int_distribution<std::size_t> nusers(1, shape.max_users);
  std::uniform_int_distribution<std::size_t> nch(1, shape.max_channels);
  std::uniform_int_distribution<std::size_t> nloc(1, shape.max_locations);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> pd(shape.p_lo, shape.p_hi);

  ScenarioConfig c;
  const std::size_t N = nusers(rng);
  const std::size_t M = nch(rng);
  const std::size_t L = nloc(rng);
  for (std::size_t m = 0; m < M; ++m) {
    c.channels.push_back({0.05 + 0.95 * u01(rng), 0.95 * u01(rng)});
  }
  std::vector<std::pair<double, double>> xy(L);
  for (auto& [x, y] : xy) {
    x = 3.0 * u01(rng);
    y = 3.0 * u01(rng);
  }
  c.space.distances.assign(L, std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      c.space.distances[i][j] = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
    }
  }
  c.space.delta = 2.5 * u01(rng);
  c.space.scale.resize(L);
  for (auto& h : c.space.scale) h = 0.5 + 1.5 * u01(rng);
  c.rates.user_channel_means.assign(N, std::vector<double>(M));
  for (std::size_t n = 0; n < N; ++n) {
    spatial::UserSpec u;
    u.p = pd(rng);
    u.travel_radius = 4.0 * u01(rng);
    u.timer_density = 0.5 + u01(rng);
    for (std::size_t d = 0; d < L; ++d) {
      if (u01(rng) < 0.75) u.allowed_locations.push_back(d);
    }
    if (u.allowed_locations.empty()) u.allowed_locations.push_back(n % L);
    u.initial_location = u.allowed_locations.front();
    u.initial_channel = n % M;
    c.users.push_back(u);
    for (auto& b : c.rates.user_channel_means[n]) b = 0.2 + 20.0 * u01(rng);
  }
  if (u01(rng) < shape.explicit_edge_chance) {
    std::vector<spatial::Edge> edges;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i + 1; j < N; ++j) {
        if (u01(rng) < 0.5) {
          edges.emplace_back(i, j);
          edges.emplace_back(j, i);
        }
      }
    }
    c.explicit_edges = edges;
  }
  return c;
}

// Random point on the product of simplices, optionally with exact zeros.
inline std::vector<std::vector<double>> random_mixed(std::mt19937_64& rng, std::size_t users,
                                                     std::size_t channels) {
  std::exponential_distribution<double> e(1.0);
  std::vector<std::vector<double>> s(users, std::vector<double>(channels));
  for (auto& row : s) {
    double t = 0.0;
    for (auto& v : row) t += (v = e(rng));
    for (auto& v : row) v /= t;
  }
  return s;
}

}  // namespace oracle

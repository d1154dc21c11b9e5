#include "spatial/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "spatial/errors.hpp"

namespace spatial {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "regular-ring", "complete",      "random-gnp",       "scatter-square",
      "grid-obstacles", "paper-9x5", "uniqueness-2x2x2"};
  return names;
}

const std::vector<std::vector<double>>& reference_rate_vectors() {
  static const std::vector<std::vector<double>> rows{
      {0.1, 0.3, 0.8, 1.0, 1.5},
      {0.2, 0.6, 1.6, 2.0, 3.0},
      {0.5, 1.5, 4.0, 5.0, 7.5}};
  return rows;
}

std::vector<Edge> ring_edges(std::size_t users, std::size_t degree) {
  if (degree % 2 != 0 || degree >= users) {
    throw ConfigError("ring degree must be even and below the user count");
  }
  std::set<Edge> edges;
  for (std::size_t i = 0; i < users; ++i) {
    for (std::size_t k = 1; k <= degree / 2; ++k) {
      const std::size_t j = (i + k) % users;
      edges.insert({i, j});
      edges.insert({j, i});
    }
  }
  return {edges.begin(), edges.end()};
}

std::vector<Edge> complete_edges(std::size_t users) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < users; ++i) {
    for (std::size_t j = 0; j < users; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::vector<Edge> gnp_edges(std::size_t users, double q, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < users; ++i) {
    for (std::size_t j = i + 1; j < users; ++j) {
      if (u(rng) < q) {
        edges.emplace_back(i, j);
        edges.emplace_back(j, i);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

namespace {

double pick_p(Rng& rng) {
  std::uniform_int_distribution<int> tenth(1, 9);
  return tenth(rng) / 10.0;
}

std::vector<Edge> graph_edges(const GeneratorParams& gp, Rng& rng) {
  if (gp.graph == "ring") return ring_edges(gp.users, gp.degree);
  if (gp.graph == "complete") return complete_edges(gp.users);
  if (gp.graph == "gnp") return gnp_edges(gp.users, gp.edge_probability, rng);
  throw ConfigError("unknown graph kind: " + gp.graph);
}

void require_positive(std::size_t v, const char* what) {
  if (v == 0) throw ConfigError(std::string(what) + " must be positive");
}

// One shared location; interference comes from the explicit edge list.
ScenarioConfig random_graph_instance(const GeneratorParams& gp, Rng& rng) {
  require_positive(gp.users, "users");
  require_positive(gp.channels, "channels");
  ScenarioConfig c;
  std::uniform_real_distribution<double> trans(0.1, 0.9);
  std::uniform_real_distribution<double> rate(0.5, 5.0);
  for (std::size_t m = 0; m < gp.channels; ++m) c.channels.push_back({trans(rng), trans(rng)});
  c.rates.user_channel_means.assign(gp.users, std::vector<double>(gp.channels));
  for (std::size_t n = 0; n < gp.users; ++n) {
    UserSpec u;
    u.p = pick_p(rng);
    c.users.push_back(u);
    for (auto& b : c.rates.user_channel_means[n]) b = rate(rng);
  }
  c.space.distances = {{0.0}};
  c.space.scale = {1.0};
  c.space.delta = 0.0;
  c.explicit_edges = graph_edges(gp, rng);
  return c;
}

ScenarioConfig paper_9x5(const GeneratorParams& gp, Rng& rng) {
  ScenarioConfig c;
  const std::size_t N = 9;
  const std::size_t M = 5;
  for (std::size_t m = 0; m < M; ++m) c.channels.push_back({0.5, 0.5});
  for (std::size_t n = 0; n < N; ++n) {
    UserSpec u;
    u.p = pick_p(rng);
    c.users.push_back(u);
    c.rates.user_channel_means.push_back(reference_rate_vectors()[n / 3]);
  }
  c.space.distances = {{0.0}};
  c.space.scale = {1.0};
  c.space.delta = 0.0;
  GeneratorParams g = gp;
  g.users = N;
  c.explicit_edges = graph_edges(g, rng);
  return c;
}

ScenarioConfig scatter_square(const GeneratorParams& gp, Rng& rng) {
  require_positive(gp.users, "users");
  require_positive(gp.channels, "channels");
  ScenarioConfig c;
  std::uniform_real_distribution<double> trans(0.1, 0.9);
  std::uniform_real_distribution<double> coord(0.0, gp.side);
  std::uniform_real_distribution<double> rate(0.5, 5.0);
  for (std::size_t m = 0; m < gp.channels; ++m) c.channels.push_back({trans(rng), trans(rng)});
  std::vector<std::pair<double, double>> xy(gp.users);
  for (auto& [x, y] : xy) {
    x = coord(rng);
    y = coord(rng);
  }
  c.space.distances.assign(gp.users, std::vector<double>(gp.users, 0.0));
  for (std::size_t i = 0; i < gp.users; ++i) {
    for (std::size_t j = 0; j < gp.users; ++j) {
      c.space.distances[i][j] =
          std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
    }
  }
  c.space.scale.assign(gp.users, 1.0);
  c.space.delta = gp.delta;
  c.rates.user_channel_means.assign(gp.users, std::vector<double>(gp.channels));
  for (std::size_t n = 0; n < gp.users; ++n) {
    UserSpec u;
    u.p = pick_p(rng);
    u.allowed_locations = {n};
    u.initial_location = n;
    c.users.push_back(u);
    for (auto& b : c.rates.user_channel_means[n]) b = rate(rng);
  }
  return c;
}

bool moore_connected(std::size_t rows, std::size_t cols, const std::vector<bool>& blocked) {
  std::vector<bool> seen(rows * cols, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    const long r = static_cast<long>(cell / cols);
    const long k = static_cast<long>(cell % cols);
    for (long dr = -1; dr <= 1; ++dr) {
      for (long dk = -1; dk <= 1; ++dk) {
        const long nr = r + dr;
        const long nk = k + dk;
        if (nr < 0 || nk < 0 || nr >= static_cast<long>(rows) || nk >= static_cast<long>(cols)) {
          continue;
        }
        const std::size_t next = static_cast<std::size_t>(nr) * cols + static_cast<std::size_t>(nk);
        if (!blocked[next] && !seen[next]) {
          seen[next] = true;
          queue.push_back(next);
        }
      }
    }
  }
  for (std::size_t i = 0; i < rows * cols; ++i) {
    if (!blocked[i] && !seen[i]) return false;
  }
  return true;
}

ScenarioConfig grid_obstacles(const GeneratorParams& gp, Rng& rng) {
  require_positive(gp.users, "users");
  require_positive(gp.channels, "channels");
  const std::size_t cells = gp.rows * gp.cols;
  if (cells < 2 || gp.obstacles + 2 > cells) {
    throw ConfigError("grid needs at least two free cells");
  }
  if (gp.channels > reference_rate_vectors()[0].size()) {
    throw ConfigError("grid-obstacles supports at most 5 channels");
  }

  // Cell 0 is the bottom-left start cell and is never blocked.
  std::vector<bool> blocked;
  std::uniform_int_distribution<std::size_t> cell(1, cells - 1);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw ConfigError("could not place obstacles on a connected grid");
    blocked.assign(cells, false);
    std::size_t placed = 0;
    while (placed < gp.obstacles) {
      const std::size_t c = cell(rng);
      if (!blocked[c]) {
        blocked[c] = true;
        ++placed;
      }
    }
    if (moore_connected(gp.rows, gp.cols, blocked)) break;
  }

  ScenarioConfig c;
  for (std::size_t m = 0; m < gp.channels; ++m) c.channels.push_back({0.5, 0.5});
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < cells; ++i) {
    if (!blocked[i]) {
      xy.emplace_back(static_cast<double>(i / gp.cols), static_cast<double>(i % gp.cols));
    }
  }
  const std::size_t L = xy.size();
  c.space.distances.assign(L, std::vector<double>(L, 0.0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      c.space.distances[i][j] =
          std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
    }
  }
  // Moore neighborhood: adjacent and diagonal cells are within 1.5.
  c.space.delta = 1.5;
  const double levels[] = {0.5, 1.0, 2.0};
  std::uniform_int_distribution<int> level(0, 2);
  c.space.scale.resize(L);
  for (auto& h : c.space.scale) h = levels[level(rng)];

  for (std::size_t n = 0; n < gp.users; ++n) {
    UserSpec u;
    u.p = pick_p(rng);
    u.travel_radius = 1.5;
    u.timer_density = 0.1;
    u.initial_location = 0;
    c.users.push_back(u);
    const auto& row = reference_rate_vectors()[(n % 9) / 3];
    c.rates.user_channel_means.emplace_back(row.begin(),
                                            row.begin() + static_cast<long>(gp.channels));
  }
  return c;
}

ScenarioConfig uniqueness_example() {
  ScenarioConfig c;
  c.channels = {{0.5, 0.5}, {0.5, 0.5}};
  c.space.distances = {{0.0, 1.0}, {1.0, 0.0}};
  c.space.scale = {1.0, 1.0};
  c.space.delta = 2.0;
  for (int n = 0; n < 2; ++n) {
    UserSpec u;
    u.p = 0.5;
    u.travel_radius = 1.0;
    c.users.push_back(u);
  }
  c.rates.user_channel_means = {{1.0, 1.0}, {1.0, 1.0}};
  return c;
}

}  // namespace

ScenarioConfig generate_scenario(const std::string& preset,
                                 const GeneratorParams& params, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "generator"));
  if (preset == "regular-ring") {
    GeneratorParams g = params;
    g.graph = "ring";
    return random_graph_instance(g, rng);
  }
  if (preset == "complete") {
    GeneratorParams g = params;
    g.graph = "complete";
    return random_graph_instance(g, rng);
  }
  if (preset == "random-gnp") {
    GeneratorParams g = params;
    g.graph = "gnp";
    return random_graph_instance(g, rng);
  }
  if (preset == "scatter-square") return scatter_square(params, rng);
  if (preset == "grid-obstacles") return grid_obstacles(params, rng);
  if (preset == "paper-9x5") return paper_9x5(params, rng);
  if (preset == "uniqueness-2x2x2") return uniqueness_example();
  throw ConfigError("unknown preset: " + preset);
}

}  // namespace spatial

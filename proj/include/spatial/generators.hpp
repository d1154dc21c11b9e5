#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spatial/rng.hpp"
#include "spatial/scenario.hpp"

namespace spatial {

struct GeneratorParams {
  std::size_t users = 9;
  std::size_t channels = 5;
  // Graph presets (and the graph of paper-9x5): "ring", "complete", "gnp".
  std::string graph = "ring";
  std::size_t degree = 2;  // ring: each user links to degree/2 on each side
  double edge_probability = 0.4;
  // scatter-square
  double side = 250.0;
  double delta = 60.0;
  // grid-obstacles
  std::size_t rows = 3;
  std::size_t cols = 3;
  std::size_t obstacles = 1;
};

const std::vector<std::string>& preset_names();

// Throws ConfigError on an unknown preset or unusable parameters.
ScenarioConfig generate_scenario(const std::string& preset,
                                 const GeneratorParams& params, std::uint64_t seed);

// Undirected edge sets, listed as directed pairs in both directions.
std::vector<Edge> ring_edges(std::size_t users, std::size_t degree);
std::vector<Edge> complete_edges(std::size_t users);
std::vector<Edge> gnp_edges(std::size_t users, double q, Rng& rng);

// Mean-rate rows used for 9 users on 5 channels; row n / 3 goes to user n.
const std::vector<std::vector<double>>& reference_rate_vectors();

}  // namespace spatial

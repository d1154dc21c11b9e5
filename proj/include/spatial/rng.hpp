#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spatial {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic seed for the substream `name` under `root`.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name);

// One root seed split into independent named substreams, so that changing
// how much randomness one part of an experiment consumes leaves the others
// untouched.
struct RngStreams {
  explicit RngStreams(std::uint64_t root_seed);

  std::uint64_t root;
  Rng channel_states;
  Rng rates;
  Rng contention;
  Rng strategy;
  Rng timers;
  Rng candidates;
  Rng acceptance;

  // Fresh streams for a nested run (e.g. one learning run per location
  // profile inside the joint algorithm).
  RngStreams child(std::uint64_t salt) const;
};

}  // namespace spatial

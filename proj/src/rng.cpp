#include "spatial/rng.hpp"

namespace spatial {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view name) {
  // FNV-1a over the name, then mixed with the root.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(root ^ splitmix64(h));
}

RngStreams::RngStreams(std::uint64_t root_seed)
    : root(root_seed),
      channel_states(derive_seed(root_seed, "channel-states")),
      rates(derive_seed(root_seed, "rates")),
      contention(derive_seed(root_seed, "contention")),
      strategy(derive_seed(root_seed, "strategy")),
      timers(derive_seed(root_seed, "timers")),
      candidates(derive_seed(root_seed, "candidate-selection")),
      acceptance(derive_seed(root_seed, "acceptance")) {}

RngStreams RngStreams::child(std::uint64_t salt) const {
  return RngStreams(splitmix64(root ^ splitmix64(salt + 0x5851f42d4c957f2dULL)));
}

}  // namespace spatial

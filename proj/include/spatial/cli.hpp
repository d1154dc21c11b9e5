#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "spatial/errors.hpp"
#include "spatial/game.hpp"
#include "spatial/generators.hpp"
#include "spatial/mobility.hpp"

namespace spatial {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitValidation = 3,
  kExitBudget = 4,
};

// Environment variable that replaces the default output directory.
inline constexpr const char* kOutputDirEnv = "SPATIAL_REUSE_OUT";

struct RunConfig {
  std::string command;  // learn | mobility | joint | analyze | enumerate | generate
  std::filesystem::path scenario;
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";

  std::size_t periods = 300;
  std::size_t slots_per_period = 100;
  double mu_scale = 1.0;
  bool record_sigma = false;

  double gamma = 10.0;
  double horizon = 1000.0;
  TimerDistribution timer = TimerDistribution::Exponential;
  double pareto_shape = 2.5;
  ChannelOracle mode = ChannelOracle::ExactArgmax;

  std::uint64_t budget = kDefaultEnumerationBudget;
  DeviationSpace space = DeviationSpace::Channels;
  bool normalized = false;

  std::string preset;
  GeneratorParams generator;
};

// Parses argv. Throws ConfigError on bad input; returns false (after printing
// usage to `out`) when help was requested.
bool parse_command_line(int argc, const char* const* argv, RunConfig& config,
                        std::ostream& out);

// Executes one command and writes its artifacts under config.out.
// Exceptions propagate; main_entry maps them to exit codes.
void run(const RunConfig& config, std::ostream& log);

// Parse, run, and map errors to exit codes with a JSON line on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spatial

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spatial/errors.hpp"
#include "spatial/rng.hpp"
#include "spatial/scenario.hpp"

namespace spatial {

// A joint state: one location and one channel per user.
struct Profile {
  LocationProfile d;
  ChannelProfile a;

  std::size_t size() const { return a.size(); }
  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;
};

Profile initial_profile(const Scenario& s);

enum class DeviationSpace { Channels, Locations, Joint };

const char* to_string(DeviationSpace space);

// A single user's choice.
struct Action {
  std::size_t location = 0;
  std::size_t channel = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

// Utility differences below this are treated as ties when deciding whether a
// deviation strictly improves. Absorbs summation-order rounding only.
inline constexpr double kImprovementTolerance = 1e-12;

// Shared affine map sending [lo, hi] onto [floor, 1]. Strictly increasing and
// identical for every user, so best responses and the weighted-potential
// structure are preserved.
struct UtilityNormalization {
  double lo = 0.0;
  double hi = 1.0;
  double floor = 0.05;

  double slope() const { return (1.0 - floor) / (hi - lo); }
  double apply(double u) const { return floor + (u - lo) * slope(); }
  double invert(double v) const { return lo + (v - floor) / slope(); }
};

// Exact min/max of U_n over all users and all profiles reachable in `space`
// from `base` when the space fits the budget; the analytic bounds
// [min ln(theta B p) + sum ln(1-p), max ln(theta B p)] otherwise.
UtilityNormalization utility_normalization(
    const Scenario& s, DeviationSpace space, const Profile& base,
    std::uint64_t budget = kDefaultEnumerationBudget, double floor = 0.05);

double expected_throughput(const Scenario& s, const Profile& prof,
                           std::size_t n);

// Proportional-fair utility: natural log of the expected throughput.
double utility(const Scenario& s, const Profile& prof, std::size_t n);

// U_n if user n alone switched to `action`.
double deviation_utility(const Scenario& s, const Profile& prof, std::size_t n,
                         Action action);

// Sum over i in N_n^{a_n}(d, a) of ln(1 - p_i).
double congestion_level(const Scenario& s, const Profile& prof, std::size_t n);

double total_utility(const Scenario& s, const Profile& prof);

double potential(const Scenario& s, const Profile& prof);

// Candidate actions for user n in the deviation space, in tie-break order
// (location-major, then channel).
std::vector<Action> candidate_actions(const Scenario& s, const Profile& prof,
                                      std::size_t n, DeviationSpace space);

// Maximizer of U_n; ties go to the lowest (location, channel) index.
Action best_response(const Scenario& s, const Profile& prof, std::size_t n,
                     DeviationSpace space);

bool is_nash(const Scenario& s, const Profile& prof, DeviationSpace space);

enum class UpdateOrder { RoundRobin, RandomUser };

struct BetterResponseResult {
  Profile terminal;
  std::size_t steps = 0;
  std::vector<double> potentials;  // potential before the first and after each step
};

// Asynchronous better-response dynamics. Each update moves one user to an
// improving action drawn uniformly from its strictly improving set; stops
// once nobody can improve. Throws std::logic_error if the potential fails to
// increase or the walk outlasts the size of the search space.
BetterResponseResult better_response_path(const Scenario& s, Profile start,
                                          DeviationSpace space,
                                          UpdateOrder order, Rng& rng);

// Number of profiles in the space around `base`.
long double search_space_size(const Scenario& s, DeviationSpace space);

// Calls visit(profile) for every profile in the space around `base`, in
// lexicographic (d, a) order. Throws BudgetExceeded first if too large.
void for_each_profile(const Scenario& s, DeviationSpace space,
                      const Profile& base, std::uint64_t budget,
                      const std::function<void(const Profile&)>& visit);

std::vector<Profile> enumerate_nash(
    const Scenario& s, DeviationSpace space, const Profile& base,
    std::uint64_t budget = kDefaultEnumerationBudget);

struct Optimum {
  Profile profile;
  double value = 0.0;
};

// Exact maximizer of the total utility; first maximizer in enumeration order.
Optimum centralized_optimum(const Scenario& s, DeviationSpace space,
                            const Profile& base,
                            std::uint64_t budget = kDefaultEnumerationBudget);

// Exact maximizer of the potential, same conventions.
Optimum potential_maximum(const Scenario& s, DeviationSpace space,
                          const Profile& base,
                          std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace spatial

#include "spatial/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spatial {

double BoundQuantities::bound() const {
  return 1.0 - static_cast<double>(max_degree) * varpi / e_min;
}

BoundQuantities bound_quantities(const Scenario& s, std::span<const std::size_t> d) {
  BoundQuantities q;
  const std::size_t N = s.num_users();
  q.e_user.assign(N, -std::numeric_limits<double>::infinity());
  for (std::size_t n = 0; n < N; ++n) {
    q.varpi = std::max(q.varpi, s.weight(n));
    for (std::size_t m = 0; m < s.num_channels(); ++m) {
      q.e_user[n] = std::max(q.e_user[n], s.log_base(n, m, d[n]));
    }
  }
  q.e_min = N == 0 ? 0.0 : *std::min_element(q.e_user.begin(), q.e_user.end());
  q.max_degree = build_interference_graph(s, d).max_degree();
  return q;
}

double normalized_total(double raw_total, const UtilityNormalization& norm,
                        std::size_t users) {
  const double offset = norm.floor - norm.lo * norm.slope();
  return norm.slope() * raw_total + static_cast<double>(users) * offset;
}

EquilibriumReport poa(const Scenario& s, const LocationProfile& d, bool normalized,
                      std::uint64_t budget) {
  const std::size_t N = s.num_users();
  EquilibriumReport r;
  r.normalized = normalized;
  Profile base{d, ChannelProfile(N, 0)};
  r.nash_set = enumerate_nash(s, DeviationSpace::Channels, base, budget);
  r.optimum = centralized_optimum(s, DeviationSpace::Channels, base, budget);
  r.inputs = bound_quantities(s, d);
  r.norm = utility_normalization(s, DeviationSpace::Channels, base, budget);

  auto scale = [&](double total) {
    return normalized ? normalized_total(total, r.norm, N) : total;
  };
  r.worst_ne_value = std::numeric_limits<double>::infinity();
  bool ne_positive = true;
  for (const auto& p : r.nash_set) {
    const double t = scale(total_utility(s, p));
    r.worst_ne_value = std::min(r.worst_ne_value, t);
    ne_positive = ne_positive && t > 0.0;
  }
  const double opt = scale(r.optimum.value);
  r.poa = r.worst_ne_value / opt;

  if (normalized) {
    const double slope = r.norm.slope();
    const double offset = r.norm.floor - r.norm.lo * slope;
    const double e = slope * r.inputs.e_min + offset;
    r.bound_value =
        1.0 - static_cast<double>(r.inputs.max_degree) * slope * r.inputs.varpi / e;
    r.applicable = ne_positive && opt > 0.0 && e > 0.0;
  } else {
    r.bound_value = r.inputs.bound();
    r.applicable = ne_positive && opt > 0.0 && r.inputs.e_min > 0.0;
  }
  return r;
}

JointBound joint_bound(const Scenario& s, std::uint64_t budget) {
  JointBound jb;
  jb.applicable = true;
  jb.eta = -std::numeric_limits<double>::infinity();
  Profile base = initial_profile(s);
  for_each_profile(s, DeviationSpace::Locations, base, budget, [&](const Profile& p) {
    const BoundQuantities q = bound_quantities(s, p.d);
    jb.varpi = q.varpi;
    if (!(q.e_min > 0.0)) jb.applicable = false;
    const double ratio = static_cast<double>(q.max_degree) / q.e_min;
    if (ratio > jb.eta) {
      jb.eta = ratio;
      jb.argmax = p.d;
    }
  });
  jb.bound = 1.0 - jb.eta * jb.varpi;
  return jb;
}

JointReport joint_poa(const Scenario& s, std::uint64_t budget) {
  JointReport r;
  const Profile base = initial_profile(s);
  r.nash_set = enumerate_nash(s, DeviationSpace::Joint, base, budget);
  r.optimum = centralized_optimum(s, DeviationSpace::Joint, base, budget);
  r.bound = joint_bound(s, budget);
  r.worst_ne_value = std::numeric_limits<double>::infinity();
  bool positive = r.optimum.value > 0.0;
  for (const auto& p : r.nash_set) {
    const double t = total_utility(s, p);
    r.worst_ne_value = std::min(r.worst_ne_value, t);
    positive = positive && t > 0.0;
  }
  r.poa = r.worst_ne_value / r.optimum.value;
  r.applicable = positive && r.bound.applicable;
  return r;
}

double performance_loss(double run_value, double optimum_value) {
  return (optimum_value - run_value) / std::abs(optimum_value) * 100.0;
}

double performance_loss(double run_value, double optimum_value,
                        const UtilityNormalization& norm, std::size_t users) {
  if (optimum_value > 0.0) return performance_loss(run_value, optimum_value);
  return performance_loss(normalized_total(run_value, norm, users),
                          normalized_total(optimum_value, norm, users));
}

}  // namespace spatial

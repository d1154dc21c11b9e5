#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spatial/game.hpp"
#include "spatial/scenario.hpp"

namespace spatial {

struct BoundQuantities {
  double varpi = 0.0;            // max_n -ln(1 - p_n)
  double e_min = 0.0;            // E(d) = min_n E_n(d)
  std::size_t max_degree = 0;    // K(d)
  std::vector<double> e_user;    // E_n(d) = max_m ln(theta_m B^n_{m,d_n} p_n)

  // 1 - K varpi / E, meaningful only when E > 0.
  double bound() const;
};

BoundQuantities bound_quantities(const Scenario& s, std::span<const std::size_t> d);

struct EquilibriumReport {
  std::vector<Profile> nash_set;
  Optimum optimum;
  double worst_ne_value = 0.0;
  double poa = 0.0;
  BoundQuantities inputs;
  double bound_value = 0.0;
  bool applicable = false;
  bool normalized = false;
  UtilityNormalization norm;  // used when normalized
};

// Exact PoA over channel profiles at fixed d. With `normalized`, totals are
// taken on the shared affine utility scale and the bound becomes
// 1 - K slope varpi / (slope E + offset).
EquilibriumReport poa(const Scenario& s, const LocationProfile& d,
                      bool normalized = false,
                      std::uint64_t budget = kDefaultEnumerationBudget);

struct JointBound {
  double eta = 0.0;   // max_d K(d) / E(d)
  double varpi = 0.0;
  double bound = 0.0;  // 1 - eta varpi
  bool applicable = false;  // every E(d) > 0
  LocationProfile argmax;
};

JointBound joint_bound(const Scenario& s,
                       std::uint64_t budget = kDefaultEnumerationBudget);

struct JointReport {
  std::vector<Profile> nash_set;
  Optimum optimum;
  double worst_ne_value = 0.0;
  double poa = 0.0;
  JointBound bound;
  bool applicable = false;  // bound applicable and all totals positive
};

JointReport joint_poa(const Scenario& s,
                      std::uint64_t budget = kDefaultEnumerationBudget);

// (optimum - run) / |optimum| * 100.
double performance_loss(double run_value, double optimum_value);

// Same, but when the raw optimum is nonpositive both totals are first mapped
// through the shared normalization: sum_n (slope U_n + offset).
double performance_loss(double run_value, double optimum_value,
                        const UtilityNormalization& norm, std::size_t users);

// Total on the normalized scale.
double normalized_total(double raw_total, const UtilityNormalization& norm,
                        std::size_t users);

}  // namespace spatial

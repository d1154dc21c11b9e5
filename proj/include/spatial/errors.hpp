#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace spatial {

// Rejected scenario or parameter invariant. `invariant` is a short stable
// name such as "energy-constraint"; `index` is the offending element when
// one exists.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string invariant, std::optional<std::size_t> index,
                  const std::string& detail);

  const std::string& invariant() const noexcept { return invariant_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::string invariant_;
  std::optional<std::size_t> index_;
};

// An exhaustive search would visit more states than allowed.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what_space, long double required,
                 std::uint64_t budget);

  long double required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  long double required_;
  std::uint64_t budget_;
};

// Malformed command line or configuration file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Saturating product used to size search spaces before enumerating them.
long double checked_space_size(long double acc, std::size_t factor);

}  // namespace spatial

#include "spatial/errors.hpp"

#include <sstream>

namespace spatial {

namespace {

std::string validation_message(const std::string& invariant,
                               std::optional<std::size_t> index,
                               const std::string& detail) {
  std::ostringstream os;
  os << invariant;
  if (index) os << " [" << *index << "]";
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

std::string budget_message(const std::string& what, long double required,
                           std::uint64_t budget) {
  std::ostringstream os;
  os << what << " has " << static_cast<double>(required)
     << " states, exceeding the enumeration budget of " << budget;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::string invariant,
                                 std::optional<std::size_t> index,
                                 const std::string& detail)
    : std::runtime_error(validation_message(invariant, index, detail)),
      invariant_(std::move(invariant)),
      index_(index) {}

BudgetExceeded::BudgetExceeded(std::string what_space, long double required,
                               std::uint64_t budget)
    : std::runtime_error(budget_message(what_space, required, budget)),
      required_(required),
      budget_(budget) {}

long double checked_space_size(long double acc, std::size_t factor) {
  return acc * static_cast<long double>(factor);
}

}  // namespace spatial

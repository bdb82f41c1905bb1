#pragma once

#include <stdexcept>

namespace smallflow {

// A table or enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain (bounds, edge ids, sizes).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultMemoryCeiling = std::size_t{2} << 30;

}  // namespace smallflow

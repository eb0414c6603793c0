#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vispoints {

/// Raised when a precondition on an argument does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A table or sieve request larger than the memory guard.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::uint64_t requested, std::uint64_t guard)
      : std::runtime_error(what + ": requested " + std::to_string(requested) +
                           " exceeds guard " + std::to_string(guard)),
        requested_(requested),
        guard_(guard) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t guard() const noexcept { return guard_; }

 private:
  std::uint64_t requested_;
  std::uint64_t guard_;
};

/// A brute-force enumeration larger than the configured point budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::uint64_t needed, std::uint64_t budget)
      : std::runtime_error("enumeration needs " + std::to_string(needed) +
                           " points, budget is " + std::to_string(budget)),
        needed_(needed),
        budget_(budget) {}

  std::uint64_t needed() const noexcept { return needed_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t needed_;
  std::uint64_t budget_;
};

/// An exact computation produced a value that contradicts a proven identity.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed on-disk data (sieve cache).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vispoints

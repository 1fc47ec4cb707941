#ifndef PRECODE_ERRORS_HPP
#define PRECODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace precode {

// Caller broke a documented precondition (bad dimensions, invalid order, ...).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// The requested configuration is valid input but not supported by this
// operation (e.g. bit mapping for a non-power-of-two alphabet).
class UnsupportedConfig : public std::invalid_argument {
 public:
  explicit UnsupportedConfig(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure could not complete (LP failure, singular channel,
// enumeration budget exceeded). Simulation-level callers may skip the
// offending instance; precoder-level callers must not return partial results.
class SolveFailure : public std::runtime_error {
 public:
  explicit SolveFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace precode

#endif  // PRECODE_ERRORS_HPP

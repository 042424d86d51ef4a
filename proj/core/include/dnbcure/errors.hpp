#ifndef DNBCURE_ERRORS_HPP
#define DNBCURE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnbcure {

// Error families map one-to-one onto CLI exit codes (see tools/).

/// Caller misuse: bad argument values, dimension mismatches.
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter outside the feasible set, or function argument outside its domain.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed or inadmissible input data (nonpositive times, bad columns, ...).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown at runtime (NaN gradient, all bootstrap fits failed, ...).
struct NumericalError : std::runtime_error {
  int iteration = -1;
  explicit NumericalError(const std::string& what, int iter = -1)
      : std::runtime_error(what), iteration(iter) {}
};

/// Invalid configuration (unsolvable moment system, inconsistent settings).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File system / serialization failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dnbcure

#endif

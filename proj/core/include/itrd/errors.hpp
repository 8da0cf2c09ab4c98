#ifndef ITRD_ERRORS_HPP
#define ITRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace itrd {

/// Shape or argument mismatch between operands (wrong row/column counts,
/// label out of range, invalid hyperparameter).
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: non-finite values, eigensolver not converging.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A kernel matrix whose trace vanishes, so it cannot be normalized.
class DegenerateKernelError : public NumericError {
 public:
  explicit DegenerateKernelError(const std::string& what) : NumericError(what) {}
};

/// Input that is not a valid normalized positive definite matrix.
class InvalidNpdError : public std::domain_error {
 public:
  explicit InvalidNpdError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed feature file; carries row/column diagnostics in the message.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Training diverged (non-finite loss); message names the offending epoch.
class TrainingError : public std::runtime_error {
 public:
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace itrd

#endif  // ITRD_ERRORS_HPP

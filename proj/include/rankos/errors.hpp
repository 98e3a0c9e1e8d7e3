#pragma once

#include <stdexcept>
#include <string>

namespace rankos {

// Ties among responses under the reject policy. Exact distribution-freeness
// assumes a continuous error law, so tied data are refused by default.
class TiesError : public std::runtime_error {
 public:
  explicit TiesError(const std::string& what) : std::runtime_error(what) {}
};

// Constant data, zero variance estimate, all-zero residuals and similar
// degenerate inputs for which the requested statistic is undefined.
class DegenerateDataError : public std::runtime_error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : std::runtime_error(what) {}
};

// Exact enumeration requested beyond the configured factorial cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A statistic exceeded the representable range; log_value carries log of the
// true value so callers can still rank it against a null table.
class OverflowError : public std::runtime_error {
 public:
  OverflowError(const std::string& what, double log_value)
      : std::runtime_error(what), log_value(log_value) {}
  double log_value;
};

// Error law outside the supported family (e.g. no finite variance where the
// raw-data test needs one).
class UnsupportedLawError : public std::runtime_error {
 public:
  explicit UnsupportedLawError(const std::string& what)
      : std::runtime_error(what) {}
};

// Rank-deficient design matrix in a linear-model fit.
class SingularDesignError : public std::runtime_error {
 public:
  explicit SingularDesignError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rankos

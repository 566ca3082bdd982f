#pragma once

#include <stdexcept>
#include <string>

namespace gllb {

/// Invalid configuration values (bad sampling parameters, unsupported
/// combinations, malformed config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be used (non-finite coefficients, shape mismatch).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation, e.g. T <= T_c.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a nonlinear evaluation produces non-finite values. Carries
/// the time and the last finite l2sq + h2sq so callers can build a report.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, double time, double norm)
      : std::runtime_error(what), time_(time), norm_(norm) {}

  double time() const noexcept { return time_; }
  double norm() const noexcept { return norm_; }

 private:
  double time_;
  double norm_;
};

}  // namespace gllb

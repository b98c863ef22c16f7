#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace q1dlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error taxonomy. The CLI maps each family onto a stable exit code:
// ConfigError -> 2, GuardError -> 3, NumericError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A precondition on the inputs does not hold.
class GuardError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public GuardError {
 public:
  using GuardError::GuardError;
};

class SizeError : public GuardError {
 public:
  using GuardError::GuardError;
};

class FrameError : public GuardError {
 public:
  FrameError(const std::string& what, int offending_index)
      : GuardError(what), offending_index_(offending_index) {}
  int offending_index() const noexcept { return offending_index_; }

 private:
  int offending_index_;
};

class BandError : public GuardError {
 public:
  using GuardError::GuardError;
};

class ConditionError : public GuardError {
 public:
  using GuardError::GuardError;
};

class CovarianceError : public GuardError {
 public:
  using GuardError::GuardError;
};

class StatisticalPowerError : public GuardError {
 public:
  using GuardError::GuardError;
};

class InsufficientDataError : public GuardError {
 public:
  using GuardError::GuardError;
};

// The computation itself failed: an iteration did not converge or a state
// left the representable range.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Arc-length distance of an angle to 0 on R/2piZ.
inline double circle_distance(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return std::min(a, kTwoPi - a);
}

inline double reduce_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

/// e^{i k theta} with the phase reduced mod 2pi before evaluation, so that
/// large k never accumulates drift from repeated multiplication.
inline Complex unit_power(double theta, long long k) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double a = std::fmod(static_cast<long double>(k) * theta, two_pi);
  if (a < 0.0L) a += two_pi;
  return std::polar(1.0, static_cast<double>(a));
}

}  // namespace q1dlab

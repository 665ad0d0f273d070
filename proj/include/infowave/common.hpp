// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <charconv>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace infowave {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error taxonomy. The CLI maps these onto process exit codes, so the
// distinction between config, validation and numerical failures matters.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user-facing configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid inputs to library operations (dimension mismatch,
// weights not summing to one, empty mixtures, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model construction failed (covariance synthesis produced an unusable
// matrix). A kind of validation failure for exit-code purposes.
class ModelError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// SCR calibration impossible (zero total power on either side).
class CalibrationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical-domain failures (loss of positive definiteness, overflow).
// `pivot` is the zero-based index of the first failing Cholesky pivot,
// or -1 when the failure has no pivot to point at.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, int pivot = -1)
      : Error(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

// Shortest decimal rendering that round-trips a double exactly.
inline std::string format_full(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace infowave

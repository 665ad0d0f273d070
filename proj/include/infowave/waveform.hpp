// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cmath>
#include <vector>

#include "infowave/common.hpp"

namespace infowave {

// Phases in [-pi, pi), the half-open convention used everywhere below.
using PhaseVector = std::vector<double>;

// mod(x + pi, 2pi) - pi, mapping onto [-pi, pi). The boundary folds down:
// wrap_phase(pi) == -pi. In-range inputs pass through bit-identically,
// which makes idempotence exact rather than within rounding.
inline double wrap_phase(double x) {
  if (!std::isfinite(x)) throw ValidationError("wrap_phase: non-finite input");
  if (x >= -kPi && x < kPi) return x;
  double r = std::fmod(x + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  double out = r - kPi;
  if (out >= kPi) out = -kPi;
  return out;
}

inline PhaseVector wrap_phase(const PhaseVector& raw) {
  PhaseVector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = wrap_phase(raw[i]);
  return out;
}

// Constant-modulus waveform: s_n = c * exp(j theta_n). Samples are derived
// at construction; treat instances as immutable.
struct Waveform {
  double magnitude = 0.0;
  PhaseVector phases;
  CVector samples;
};

inline Waveform phases_to_waveform(const PhaseVector& theta, double c) {
  if (!(c > 0.0)) throw ValidationError("phases_to_waveform: magnitude must be positive");
  if (theta.empty()) throw ValidationError("phases_to_waveform: empty phase vector");
  Waveform w;
  w.magnitude = c;
  w.phases = theta;
  w.samples.resize(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t n = 0; n < theta.size(); ++n)
    w.samples(static_cast<Eigen::Index>(n)) = std::polar(c, theta[n]);
  return w;
}

inline double waveform_energy(const Waveform& w) { return w.samples.squaredNorm(); }

// (N + n_t - 1) x n_t banded Toeplitz matrix; column j holds s shifted down
// by j, so matrix * x is the linear convolution of s and x.
struct ConvolutionMatrix {
  CMatrix matrix;
  Waveform source;
};

inline CMatrix convolution_matrix_of(const CVector& s, int n_t) {
  if (n_t < 1) throw ValidationError("convolution_matrix: tap count must be >= 1");
  if (s.size() < 1) throw ValidationError("convolution_matrix: empty waveform");
  Eigen::Index n = s.size();
  CMatrix m = CMatrix::Zero(n + n_t - 1, n_t);
  for (Eigen::Index j = 0; j < n_t; ++j) m.block(j, j, n, 1) = s;
  return m;
}

inline ConvolutionMatrix convolution_matrix(const Waveform& w, int n_t) {
  return ConvolutionMatrix{convolution_matrix_of(w.samples, n_t), w};
}

}  // namespace infowave

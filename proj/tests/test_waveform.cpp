// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "infowave/rng.hpp"
#include "infowave/waveform.hpp"
#include "oracles.hpp"

using namespace infowave;

namespace {

// Distance on the circle; periodicity cannot be tested with plain subtraction
// because wrapped representatives of x and x + 2*pi may differ by ~1 ulp of pi.
double circular_distance(double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

}  // namespace

TEST_CASE("wrap_phase maps into [-pi, pi) with boundary at -pi") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(kPi) == -kPi);
  CHECK(wrap_phase(-kPi) == -kPi);
  CHECK(wrap_phase(kTwoPi) == 0.0);
  CHECK(std::abs(wrap_phase(3.0 * kPi) - (-kPi)) < 1e-12);
}

TEST_CASE("wrap_phase is exactly idempotent and 2*pi periodic") {
  Rng rng(derive_seed(11, "wrap-prop"));
  for (int i = 0; i < 100000; ++i) {
    double x = rng.uniform(-40.0, 40.0);
    double w = wrap_phase(x);
    REQUIRE(w >= -kPi);
    REQUIRE(w < kPi);
    CHECK(wrap_phase(w) == w);
    CHECK(circular_distance(wrap_phase(x + kTwoPi), w) < 1e-9);
    CHECK(circular_distance(wrap_phase(x - kTwoPi), w) < 1e-9);
  }
}

TEST_CASE("wrap_phase rejects non-finite input") {
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::infinity()), ValidationError);
  CHECK_THROWS_AS(wrap_phase(std::numeric_limits<double>::quiet_NaN()), ValidationError);
}

TEST_CASE("phases_to_waveform places all samples on the circle of radius c") {
  PhaseVector theta{0.0, kPi / 2.0, -kPi / 2.0, 1.0};
  Waveform w = phases_to_waveform(theta, 2.0);
  REQUIRE(w.samples.size() == 4);
  CHECK(w.magnitude == 2.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(std::abs(w.samples(i)) - 2.0) < 1e-15);
    CHECK(std::abs(std::arg(w.samples(i)) - theta[static_cast<std::size_t>(i)]) < 1e-12);
  }
  CHECK(std::abs(waveform_energy(w) - 16.0) < 1e-12);
}

TEST_CASE("phases_to_waveform validates its arguments") {
  PhaseVector theta{0.0, 1.0};
  CHECK_THROWS_AS(phases_to_waveform(theta, 0.0), ValidationError);
  CHECK_THROWS_AS(phases_to_waveform(PhaseVector{}, 1.0), ValidationError);
}

TEST_CASE("convolution matrix is banded Toeplitz with unit-shifted copies") {
  CVector s(3);
  s << cdouble(1, 1), cdouble(2, -1), cdouble(0, 3);
  CMatrix cm = convolution_matrix_of(s, 4);
  REQUIRE(cm.rows() == 6);
  REQUIRE(cm.cols() == 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 6; ++i) {
      cdouble want = (i >= j && i - j < 3) ? s(i - j) : cdouble(0, 0);
      CHECK(cm(i, j) == want);
    }
  }
}

TEST_CASE("convolution matrix times a vector performs linear convolution") {
  Rng rng(derive_seed(12, "conv-prop"));
  for (int rep = 0; rep < 20; ++rep) {
    int n = rng.uniform_int(1, 8);
    int n_t = rng.uniform_int(1, 8);
    CVector s(n), x(n_t);
    for (int i = 0; i < n; ++i) s(i) = rng.complex_normal();
    for (int i = 0; i < n_t; ++i) x(i) = rng.complex_normal();
    CMatrix cm = convolution_matrix_of(s, n_t);
    CVector got = cm * x;
    CVector want = test_oracle::naive_convolution(s, x);
    REQUIRE(got.size() == want.size());
    CHECK((got - want).norm() < 1e-12 * (1.0 + want.norm()));
  }
}

TEST_CASE("convolution matrix Frobenius norm equals sqrt(n_t * energy)") {
  Rng rng(derive_seed(13, "conv-norm"));
  PhaseVector theta(5);
  for (std::size_t i = 0; i < 5; ++i) theta[i] = rng.uniform(-kPi, kPi);
  Waveform w = phases_to_waveform(theta, std::sqrt(2.0 / 5.0));
  ConvolutionMatrix cm = convolution_matrix(w, 3);
  double want = std::sqrt(3.0 * waveform_energy(w));
  CHECK(std::abs(cm.matrix.norm() - want) < 1e-12);
}

TEST_CASE("difference of convolution matrices scales with the sample difference") {
  Rng rng(derive_seed(14, "conv-diff"));
  int n = 6, n_t = 4;
  CVector a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a(i) = rng.complex_normal();
    b(i) = rng.complex_normal();
  }
  CMatrix da = convolution_matrix_of(a, n_t) - convolution_matrix_of(b, n_t);
  double want = std::sqrt(static_cast<double>(n_t)) * (a - b).norm();
  CHECK(std::abs(da.norm() - want) < 1e-12 * (1.0 + want));
}

TEST_CASE("convolution matrix validates tap count") {
  CVector s(2);
  s << cdouble(1, 0), cdouble(0, 1);
  CHECK_THROWS_AS(convolution_matrix_of(s, 0), ValidationError);
  CHECK_THROWS_AS(convolution_matrix_of(CVector(), 1), ValidationError);
}

// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "infowave/objective.hpp"
#include "infowave/rng.hpp"
#include "oracles.hpp"

using namespace infowave;

namespace {

GmdModel single(const CMatrix& cov) {
  GmdModel m;
  m.components.push_back({1.0, cov});
  return m;
}

// Scalar scenario: R = [1], Q = [1], unit-modulus code of length 1, so the
// signal-present covariance is [2].
Scenario scalar_scenario() {
  Scenario sc;
  sc.target = single(CMatrix::Identity(1, 1));
  sc.clutter = single(CMatrix::Identity(1, 1));
  sc.code_length = 1;
  sc.energy = 1.0;
  return sc;
}

Scenario random_scenario(int n, int n_t, std::mt19937_64& gen) {
  Scenario sc;
  sc.code_length = n;
  sc.energy = 1.0;
  sc.target.components.push_back({0.2, test_oracle::random_pd(n_t, gen)});
  sc.target.components.push_back({0.8, test_oracle::random_pd(n_t, gen)});
  sc.clutter.components.push_back({0.8, test_oracle::random_pd(n + n_t - 1, gen)});
  sc.clutter.components.push_back({0.2, test_oracle::random_pd(n + n_t - 1, gen)});
  return sc;
}

Waveform random_waveform(int n, double amplitude, Rng& rng) {
  PhaseVector theta(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = rng.uniform(-kPi, kPi);
  return phases_to_waveform(theta, amplitude);
}

}  // namespace

TEST_CASE("scalar case evaluates to the closed-form constants") {
  Scenario sc = scalar_scenario();
  Waveform w = phases_to_waveform(PhaseVector{0.7}, 1.0);
  ObjectiveBreakdown b = miub_objective(w, sc);
  CHECK(std::abs(b.e_bar - std::log(2.0)) < 1e-12);
  CHECK(std::abs(b.d_bar - (1.0 - std::log(2.0))) < 1e-12);
  CHECK(std::abs(b.f_total - 1.0) < 1e-12);
  REQUIRE(b.matches.size() == 1);
  CHECK(b.matches[0] == 0);
}

TEST_CASE("gaussian_kl closed-form values and properties") {
  CMatrix one = CMatrix::Identity(1, 1);
  CHECK(gaussian_kl(one, one) == 0.0);
  CHECK(std::abs(gaussian_kl(2.0 * one, one) - (1.0 - std::log(2.0))) < 1e-12);

  std::mt19937_64 gen(51);
  for (int rep = 0; rep < 200; ++rep) {
    CMatrix a = test_oracle::random_pd(4, gen);
    CMatrix b = test_oracle::random_pd(4, gen);
    double ab = gaussian_kl(a, b);
    CHECK(ab >= -1e-11);
    CHECK(std::abs(gaussian_kl(a, a)) < 1e-10);
  }

  CHECK_THROWS_AS(gaussian_kl(CMatrix::Identity(2, 2), one), ValidationError);
}

TEST_CASE("composite covariances enumerate clutter-major weighted pairs") {
  std::mt19937_64 gen(52);
  int n = 3, n_t = 2;
  GmdModel target, clutter;
  target.components.push_back({0.8, test_oracle::random_pd(n_t, gen)});
  target.components.push_back({0.2, test_oracle::random_pd(n_t, gen)});
  clutter.components.push_back({0.2, test_oracle::random_pd(n + n_t - 1, gen)});
  clutter.components.push_back({0.8, test_oracle::random_pd(n + n_t - 1, gen)});

  Rng rng(derive_seed(1, "composite"));
  Waveform w = random_waveform(n, 1.0, rng);
  CMatrix sm = convolution_matrix_of(w.samples, n_t);
  CompositeLikelihood c = composite_covariances(sm, target, clutter);

  REQUIRE(c.entries.size() == 4);
  double expected_w[4] = {0.16, 0.04, 0.64, 0.16};
  for (std::size_t l = 0; l < 4; ++l) {
    const CompositeEntry& e = c.entries[l];
    CHECK(e.clutter_index == static_cast<int>(l / 2));
    CHECK(e.target_index == static_cast<int>(l % 2));
    CHECK(std::abs(e.weight - expected_w[l]) < 1e-15);
    CMatrix direct =
        sm * target.components[static_cast<std::size_t>(e.target_index)].covariance *
            sm.adjoint() +
        clutter.components[static_cast<std::size_t>(e.clutter_index)].covariance;
    CHECK((e.sigma - direct).norm() < 1e-12 * direct.norm());
    CHECK((e.sigma - e.sigma.adjoint()).norm() < 1e-14 * e.sigma.norm());
  }
  double wsum = 0.0;
  for (const CompositeEntry& e : c.entries) wsum += e.weight;
  CHECK(std::abs(wsum - 1.0) < 1e-12);

  CHECK_THROWS_AS(composite_covariances(CMatrix::Zero(4, 3), target, clutter),
                  ValidationError);
}

TEST_CASE("single-component information term equals the exact Gaussian value") {
  std::mt19937_64 gen(53);
  int n = 5, n_t = 3;
  Scenario sc;
  sc.code_length = n;
  sc.target = single(test_oracle::random_pd(n_t, gen));
  sc.clutter = single(test_oracle::random_pd(n + n_t - 1, gen));

  Rng rng(derive_seed(2, "single-mi"));
  Waveform w = random_waveform(n, sc.amplitude(), rng);
  CMatrix sm = convolution_matrix_of(w.samples, n_t);

  ObjectiveBreakdown b = miub_objective(w, sc);
  double exact = test_oracle::exact_gaussian_mi(sm, sc.target.components[0].covariance,
                                                sc.clutter.components[0].covariance);
  CHECK(std::abs(b.e_bar - exact) < 1e-10);

  // With one clutter component the divergence term is the plain Gaussian KL.
  CMatrix sigma = sm * sc.target.components[0].covariance * sm.adjoint() +
                  sc.clutter.components[0].covariance;
  CHECK(std::abs(b.d_bar - gaussian_kl(sigma, sc.clutter.components[0].covariance)) < 1e-9);
}

TEST_CASE("matching ties break to the smallest clutter index") {
  std::mt19937_64 gen(54);
  CMatrix r = test_oracle::random_pd(4, gen);
  GmdModel clutter;
  clutter.components.push_back({0.5, r});
  clutter.components.push_back({0.5, r});
  GmdModel target = single(0.5 * CMatrix::Identity(2, 2));

  CMatrix sm = convolution_matrix_of(CVector::Ones(3), 2);
  CompositeLikelihood c = composite_covariances(sm, target, clutter);
  auto [d_bar, matches] = kl_approx(c, clutter);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0] == 0);
  CHECK(matches[1] == 0);
  CHECK(d_bar > 0.0);
}

TEST_CASE("a vanishing target matches every entry to its own clutter component") {
  GmdModel clutter;
  clutter.components.push_back({0.5, CMatrix::Identity(4, 4)});
  clutter.components.push_back({0.5, 5.0 * CMatrix::Identity(4, 4)});
  GmdModel target = single(1e-6 * CMatrix::Identity(2, 2));

  CMatrix sm = convolution_matrix_of(CVector::Ones(3), 2);
  CompositeLikelihood c = composite_covariances(sm, target, clutter);
  auto [d_bar, matches] = kl_approx(c, clutter);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0] == 0);
  CHECK(matches[1] == 1);
  CHECK(d_bar < 1e-3);
}

TEST_CASE("engine breakdown agrees with the reference free functions") {
  std::mt19937_64 gen(55);
  Scenario sc = random_scenario(6, 3, gen);
  MiubObjective engine(sc);
  Rng rng(derive_seed(3, "engine"));
  for (int rep = 0; rep < 5; ++rep) {
    Waveform w = random_waveform(6, sc.amplitude(), rng);
    ObjectiveBreakdown fast = engine.breakdown(w);

    CMatrix sm = convolution_matrix_of(w.samples, sc.tir_length());
    CompositeLikelihood c = composite_covariances(sm, sc.target, sc.clutter);
    double mi = mi_approx(c, sc.clutter);
    auto [d_bar, matches] = kl_approx(c, sc.clutter);

    CHECK(std::abs(fast.e_bar - mi) < 1e-9);
    CHECK(std::abs(fast.d_bar - d_bar) < 1e-9);
    CHECK(std::abs(fast.f_total - (mi + d_bar)) < 1e-9);
    CHECK(fast.matches == matches);
  }
}

TEST_CASE("objective is invariant to a global phase rotation") {
  std::mt19937_64 gen(56);
  Scenario sc = random_scenario(5, 2, gen);
  MiubObjective engine(sc);
  Rng rng(derive_seed(4, "global-phase"));
  Waveform w = random_waveform(5, sc.amplitude(), rng);
  double base = engine.value(w);
  for (double shift : {0.3, -1.2, 2.9}) {
    PhaseVector rotated = w.phases;
    for (double& t : rotated) t = wrap_phase(t + shift);
    double v = engine.value(phases_to_waveform(rotated, sc.amplitude()));
    CHECK(std::abs(v - base) < 1e-9);
  }
}

TEST_CASE("output power ratio matches a naive triple-loop trace") {
  std::mt19937_64 gen(57);
  Scenario sc = random_scenario(4, 3, gen);
  Rng rng(derive_seed(5, "scr"));
  Waveform w = random_waveform(4, sc.amplitude(), rng);

  CMatrix sm = convolution_matrix_of(w.samples, sc.tir_length());
  CMatrix qbar = 0.2 * sc.target.components[0].covariance +
                 0.8 * sc.target.components[1].covariance;
  double num = test_oracle::naive_trace_sqs(sm, qbar);
  double den = 0.8 * sc.clutter.components[0].covariance.trace().real() +
               0.2 * sc.clutter.components[1].covariance.trace().real();
  double expect = 10.0 * std::log10(num / den);
  CHECK(std::abs(scr_objective(w, sc) - expect) < 1e-10);

  Scenario zero = sc;
  for (GaussianComponent& c : zero.target.components) c.covariance.setZero();
  CHECK_THROWS_AS(scr_objective(w, zero), CalibrationError);
}

TEST_CASE("weighted-sum objective interpolates its two terms") {
  std::mt19937_64 gen(58);
  Scenario sc = random_scenario(4, 2, gen);
  Rng rng(derive_seed(6, "wsm"));
  Waveform w = random_waveform(4, sc.amplitude(), rng);

  double mi = MiubObjective(sc).breakdown(w).e_bar;
  double scr = scr_objective(w, sc);
  CHECK(std::abs(wsm_objective(w, sc, 0.0) - mi) < 1e-12);
  CHECK(std::abs(wsm_objective(w, sc, 1.0) - scr) < 1e-12);
  CHECK(std::abs(wsm_objective(w, sc, 0.3) - (0.3 * scr + 0.7 * mi)) < 1e-12);
  CHECK_THROWS_AS(wsm_objective(w, sc, 1.5), ValidationError);
}

TEST_CASE("covariance-map bound formula and scenario overload agree") {
  CHECK(std::abs(lipschitz_local_bound(3, 4.0, 2.5) - 2.0 * 3 * 2.0 * 2.5) < 1e-12);

  std::mt19937_64 gen(59);
  Scenario sc = random_scenario(4, 3, gen);
  double lam = 0.0;
  for (const GaussianComponent& c : sc.target.components) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c.covariance);
    lam = std::max(lam, es.eigenvalues().maxCoeff());
  }
  CHECK(std::abs(lipschitz_local_bound(sc) -
                 lipschitz_local_bound(sc.tir_length(), sc.energy, lam)) < 1e-12);
}

TEST_CASE("fitness closures dispatch to the matching objective") {
  std::mt19937_64 gen(60);
  Scenario sc = random_scenario(4, 2, gen);
  Rng rng(derive_seed(7, "fitness"));
  Waveform w = random_waveform(4, sc.amplitude(), rng);

  CHECK(std::abs(make_fitness(sc, ObjectiveKind::kMiub)(w) - miub_objective(w, sc).f_total) <
        1e-12);
  CHECK(std::abs(make_fitness(sc, ObjectiveKind::kMi)(w) - miub_objective(w, sc).e_bar) <
        1e-12);
  CHECK(std::abs(make_fitness(sc, ObjectiveKind::kWsm, 0.5)(w) - wsm_objective(w, sc, 0.5)) <
        1e-12);
  CHECK_THROWS_AS(make_fitness(sc, ObjectiveKind::kRpc), ValidationError);
}

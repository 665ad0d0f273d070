// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "infowave/common.hpp"
#include "infowave/evaluation.hpp"
#include "infowave/gmd_model.hpp"
#include "infowave/objective.hpp"
#include "infowave/optimizer.hpp"
#include "infowave/rng.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
  std::int64_t count = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline McEstimate summarize(const std::vector<double>& samples, std::uint64_t seed) {
  McEstimate e;
  e.count = static_cast<std::int64_t>(samples.size());
  e.seed = seed;
  e.value = pairwise_sum(samples) / static_cast<double>(samples.size());
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    dev[i] = (samples[i] - e.value) * (samples[i] - e.value);
  double var = pairwise_sum(dev) /
               std::max<double>(1.0, static_cast<double>(samples.size() - 1));
  e.se = std::sqrt(var / static_cast<double>(samples.size()));
  return e;
}

}  // namespace detail

// Monte-Carlo KL(p || q): mean of log p(y) - log q(y) under y ~ p.
inline McEstimate mc_kl(const GmdModel& p, const GmdModel& q, std::int64_t samples,
                        std::uint64_t seed, unsigned threads = 1) {
  if (samples < 1000) throw ValidationError("mc_kl: need at least 1000 samples");
  if (p.dim() != q.dim()) throw ValidationError("mc_kl: dimension mismatch");
  GmdSampler sampler(p, "p");
  GmdDensity dp(p, "p"), dq(q, "q");
  std::vector<double> d(static_cast<std::size_t>(samples));
  parallel_for(d.size(), threads, [&](std::size_t i) {
    Rng r(derive_seed(seed, "mc-kl", i));
    CVector y = sampler.sample(r);
    d[i] = dp.log_density(y) - dq.log_density(y);
  });
  return detail::summarize(d, seed);
}

// Monte-Carlo mutual information: mean of log p(y|x) - log p1(y) under the
// joint draw x ~ p(x), y = Sx + w. p(y|x) is the clutter mixture shifted to
// mean Sx.
inline McEstimate mc_mutual_information(const Scenario& scenario, const Waveform& w,
                                        std::int64_t samples, std::uint64_t seed,
                                        unsigned threads = 1) {
  check_scenario_shape(scenario);
  if (samples < 1) throw ValidationError("mc_mutual_information: no samples");
  CMatrix sm = convolution_matrix_of(w.samples, scenario.tir_length());
  CompositeLikelihood composite =
      composite_covariances(sm, scenario.target, scenario.clutter);
  GmdDensity conditional(scenario.clutter, "clutter");
  GmdDensity marginal(to_model(composite), "composite");
  GmdSampler target_sampler(scenario.target, "target");
  GmdSampler clutter_sampler(scenario.clutter, "clutter");

  std::vector<double> d(static_cast<std::size_t>(samples));
  parallel_for(d.size(), threads, [&](std::size_t i) {
    Rng r(derive_seed(seed, "mc-mi", i));
    CVector x = target_sampler.sample(r);
    CVector noise = clutter_sampler.sample(r);
    CVector y = sm * x + noise;
    d[i] = conditional.log_density(noise) - marginal.log_density(y);
  });
  return detail::summarize(d, seed);
}

struct NestedMcConfig {
  std::int64_t outer = 200;
  std::int64_t inner = 500;
};

// Nested Monte-Carlo of the design criterion: outer draws of x, inner
// conditional KL estimate E_w[log p(y|x) - log p0(y)], y = Sx + w. The
// standard error comes from the dispersion of the outer means.
inline McEstimate mc_miub(const Scenario& scenario, const Waveform& w,
                          const NestedMcConfig& cfg, std::uint64_t seed,
                          unsigned threads = 1) {
  check_scenario_shape(scenario);
  if (cfg.outer < 2 || cfg.inner < 1)
    throw ValidationError("mc_miub: need outer >= 2 and inner >= 1");
  CMatrix sm = convolution_matrix_of(w.samples, scenario.tir_length());
  // Both log p(y|x) = p_w(y - Sx) and log p0(y) = p_w(y) evaluate the
  // clutter density.
  GmdDensity clutter_density(scenario.clutter, "clutter");
  GmdSampler target_sampler(scenario.target, "target");
  GmdSampler clutter_sampler(scenario.clutter, "clutter");

  std::vector<double> outer_mean(static_cast<std::size_t>(cfg.outer));
  parallel_for(outer_mean.size(), threads, [&](std::size_t i) {
    Rng r(derive_seed(seed, "mc-miub", i));
    CVector x = target_sampler.sample(r);
    CVector mean = sm * x;
    std::vector<double> inner(static_cast<std::size_t>(cfg.inner));
    for (std::size_t j = 0; j < inner.size(); ++j) {
      CVector noise = clutter_sampler.sample(r);
      inner[j] = clutter_density.log_density(noise) -
                 clutter_density.log_density(mean + noise);
    }
    outer_mean[i] = pairwise_sum(inner) / static_cast<double>(inner.size());
  });
  return detail::summarize(outer_mean, seed);
}

// Closed-form approximation versus its Monte-Carlo oracle, with the error
// drivers: total receive variance for the information term, worst-case
// cross-component divergence margin for the matching term.
struct ApproximationReport {
  double approx_value = 0.0;
  McEstimate oracle;
  double abs_gap = 0.0;
  double gap_se_units = 0.0;
  double min_component_separation = 0.0;
  double total_variance_trace = 0.0;
};

struct ApproximationReportPair {
  ApproximationReport mi;
  ApproximationReport kl;
};

inline ApproximationReportPair approximation_error_report(const Scenario& scenario,
                                                          const Waveform& w,
                                                          std::int64_t samples,
                                                          std::uint64_t seed,
                                                          unsigned threads = 1) {
  check_scenario_shape(scenario);
  CMatrix sm = convolution_matrix_of(w.samples, scenario.tir_length());
  CompositeLikelihood composite =
      composite_covariances(sm, scenario.target, scenario.clutter);

  double trace_cy = 0.0;
  for (const CompositeEntry& e : composite.entries)
    trace_cy += e.weight * e.sigma.trace().real();

  auto [d_bar, matches] = kl_approx(composite, scenario.clutter);
  double separation = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < composite.entries.size(); ++l) {
    for (std::size_t k = 0; k < scenario.clutter.components.size(); ++k) {
      if (static_cast<int>(k) == matches[l]) continue;
      separation = std::min(separation,
                            gaussian_kl(composite.entries[l].sigma,
                                        scenario.clutter.components[k].covariance));
    }
  }

  ApproximationReportPair out;
  out.mi.approx_value = mi_approx(composite, scenario.clutter);
  out.mi.oracle = mc_mutual_information(scenario, w, samples, seed, threads);
  out.mi.abs_gap = std::abs(out.mi.approx_value - out.mi.oracle.value);
  out.mi.gap_se_units = out.mi.oracle.se > 0.0 ? out.mi.abs_gap / out.mi.oracle.se
                                               : std::numeric_limits<double>::infinity();
  out.mi.min_component_separation = separation;
  out.mi.total_variance_trace = trace_cy;

  out.kl.approx_value = d_bar;
  out.kl.oracle = mc_kl(to_model(composite), scenario.clutter, samples,
                        derive_seed(seed, "kl-oracle"), threads);
  out.kl.abs_gap = std::abs(out.kl.approx_value - out.kl.oracle.value);
  out.kl.gap_se_units = out.kl.oracle.se > 0.0 ? out.kl.abs_gap / out.kl.oracle.se
                                               : std::numeric_limits<double>::infinity();
  out.kl.min_component_separation = separation;
  out.kl.total_variance_trace = trace_cy;
  return out;
}

struct LipschitzReport {
  int pairs = 0;
  double bound = 0.0;
  double max_covariance_ratio = 0.0;
  double mean_covariance_ratio = 0.0;
  int violations = 0;
  double max_objective_ratio = 0.0;
};

// Random feasible pairs: the covariance difference per receive component
// must stay under the analytic bound; the objective difference ratio is
// reported (its constant has no closed form).
inline LipschitzReport lipschitz_probe(const Scenario& scenario, int pairs,
                                       std::uint64_t seed, unsigned threads = 1) {
  check_scenario_shape(scenario);
  if (pairs < 1) throw ValidationError("lipschitz_probe: need at least one pair");
  MiubObjective objective(scenario);
  double c = scenario.amplitude();
  int n = scenario.code_length;

  std::vector<double> cov_ratio(static_cast<std::size_t>(pairs));
  std::vector<double> f_ratio(static_cast<std::size_t>(pairs));
  parallel_for(cov_ratio.size(), threads, [&](std::size_t i) {
    Rng r(derive_seed(seed, "lipschitz", i));
    Waveform s1 = random_phase_code(n, c, r);
    Waveform s2 = random_phase_code(n, c, r);
    double dist = (s1.samples - s2.samples).norm();
    while (dist < 1e-6) {
      s2 = random_phase_code(n, c, r);
      dist = (s1.samples - s2.samples).norm();
    }
    CMatrix m1 = convolution_matrix_of(s1.samples, scenario.tir_length());
    CMatrix m2 = convolution_matrix_of(s2.samples, scenario.tir_length());
    CompositeLikelihood c1 = composite_covariances(m1, scenario.target, scenario.clutter);
    CompositeLikelihood c2 = composite_covariances(m2, scenario.target, scenario.clutter);
    double worst = 0.0;
    for (std::size_t l = 0; l < c1.entries.size(); ++l)
      worst = std::max(worst, (c1.entries[l].sigma - c2.entries[l].sigma).norm());
    cov_ratio[i] = worst / dist;
    f_ratio[i] = std::abs(objective.value(s1) - objective.value(s2)) / dist;
  });

  LipschitzReport rep;
  rep.pairs = pairs;
  rep.bound = lipschitz_local_bound(scenario);
  for (double v : cov_ratio) {
    rep.max_covariance_ratio = std::max(rep.max_covariance_ratio, v);
    if (v > rep.bound) ++rep.violations;
  }
  rep.mean_covariance_ratio =
      pairwise_sum(cov_ratio) / static_cast<double>(cov_ratio.size());
  for (double v : f_ratio) rep.max_objective_ratio = std::max(rep.max_objective_ratio, v);
  return rep;
}

}  // namespace infowave

// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "infowave/common.hpp"
#include "infowave/gmd_model.hpp"
#include "infowave/linalg.hpp"
#include "infowave/objective.hpp"
#include "infowave/rng.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

// Draws from a zero-mean complex Gaussian mixture: component by weight,
// then triangular (or eigen, for semidefinite) factor times a standard
// complex normal vector. Factors are cached across draws.
class GmdSampler {
 public:
  explicit GmdSampler(const GmdModel& model, std::string_view label = "model") {
    check_model_shape(model, label);
    dim_ = model.dim();
    double acc = 0.0;
    for (const GaussianComponent& c : model.components) {
      acc += c.weight;
      cumulative_.push_back(acc);
      factor_.push_back(psd_sqrt_factor(c.covariance, label));
    }
    cumulative_.back() = 1.0;
  }

  int dim() const { return dim_; }

  int sample_component(Rng& rng) const {
    double u = rng.unit();
    for (std::size_t j = 0; j < cumulative_.size(); ++j)
      if (u < cumulative_[j]) return static_cast<int>(j);
    return static_cast<int>(cumulative_.size() - 1);
  }

  CVector sample(Rng& rng) const {
    int j = sample_component(rng);
    CVector z(dim_);
    for (int i = 0; i < dim_; ++i) z(i) = rng.complex_normal();
    return factor_[static_cast<std::size_t>(j)] * z;
  }

 private:
  int dim_ = 0;
  std::vector<double> cumulative_;
  std::vector<CMatrix> factor_;
};

inline CVector sample_gmd(const GmdModel& model, Rng& rng) {
  return GmdSampler(model).sample(rng);
}

// Log-density of a zero-mean complex Gaussian mixture, evaluated fully in
// the log domain: log sum_j w_j exp(-q_j(y) - n log pi - log det C_j).
class GmdDensity {
 public:
  explicit GmdDensity(const GmdModel& model, std::string_view label = "model") {
    check_model_shape(model, label);
    dim_ = model.dim();
    for (const GaussianComponent& c : model.components) {
      chol_.emplace_back(c.covariance, label);
      log_weight_.push_back(std::log(c.weight));
    }
  }

  int dim() const { return dim_; }

  double log_density(const CVector& y) const {
    if (y.size() != dim_) throw ValidationError("log_density: dimension mismatch");
    std::vector<double> terms(chol_.size());
    for (std::size_t j = 0; j < chol_.size(); ++j)
      terms[j] = log_weight_[j] - chol_[j].quad_form(y) -
                 dim_ * std::log(kPi) - chol_[j].log_det();
    return log_sum_exp(terms);
  }

  double log_density_shifted(const CVector& y, const CVector& mean) const {
    return log_density(y - mean);
  }

 private:
  int dim_ = 0;
  std::vector<HermitianCholesky> chol_;
  std::vector<double> log_weight_;
};

// log p1(y) - log p0(y), the exact mixture likelihood ratio statistic.
class LlrEvaluator {
 public:
  LlrEvaluator(const CompositeLikelihood& composite, const GmdModel& clutter)
      : p1_(to_model(composite), "composite"), p0_(clutter, "clutter") {
    if (p1_.dim() != p0_.dim()) throw ValidationError("llr: dimension mismatch");
  }

  double statistic(const CVector& y) const {
    return p1_.log_density(y) - p0_.log_density(y);
  }

  const GmdDensity& signal_density() const { return p1_; }
  const GmdDensity& null_density() const { return p0_; }

 private:
  GmdDensity p1_;
  GmdDensity p0_;
};

inline double llr_statistic(const CVector& y, const CompositeLikelihood& composite,
                            const GmdModel& clutter) {
  return LlrEvaluator(composite, clutter).statistic(y);
}

struct DetectionRun {
  Scenario scenario;
  Waveform waveform;
  int trials = 10000;
  std::vector<double> thresholds;  // empty: sweep the pooled statistics
  double min_pfa = 1e-2;           // adequacy guard: trials >= 10 / min_pfa
  std::uint64_t seed = 0;
};

struct RocPoint {
  double threshold = 0.0;
  double pfa = 0.0;
  double pd = 0.0;
  double se_pfa = 0.0;
  double se_pd = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // descending threshold: (0,0) -> (1,1)
  int trials = 0;
};

namespace detail {

inline double exceed_fraction(const std::vector<double>& sorted, double threshold) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), threshold);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

inline double binomial_se(double p, int n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace detail

// Monte-Carlo ROC: simulate both hypotheses, sweep thresholds over the
// pooled statistics (or a caller-provided grid). Per-trial seeds make the
// curve independent of the thread count, and the H1 draws are shared across
// waveforms evaluated under the same seed (common random numbers).
inline RocCurve roc_curve(const DetectionRun& run, unsigned threads = 1) {
  check_scenario_shape(run.scenario);
  if (run.trials < 1) throw ValidationError("roc: trial count must be positive");
  if (!(run.min_pfa > 0.0) || run.trials < static_cast<int>(10.0 / run.min_pfa))
    throw ValidationError("roc: trials < 10 / min_pfa; results would be vacuous");

  CMatrix sm = convolution_matrix_of(run.waveform.samples, run.scenario.tir_length());
  CompositeLikelihood composite =
      composite_covariances(sm, run.scenario.target, run.scenario.clutter);
  LlrEvaluator llr(composite, run.scenario.clutter);
  GmdSampler clutter_sampler(run.scenario.clutter, "clutter");
  GmdSampler target_sampler(run.scenario.target, "target");

  std::size_t n = static_cast<std::size_t>(run.trials);
  std::vector<double> t0(n), t1(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng r0(derive_seed(run.seed, "det-h0", i));
    t0[i] = llr.statistic(clutter_sampler.sample(r0));
    Rng r1(derive_seed(run.seed, "det-h1", i));
    CVector x = target_sampler.sample(r1);
    CVector w = clutter_sampler.sample(r1);
    t1[i] = llr.statistic(sm * x + w);
  });

  std::vector<double> s0 = t0, s1 = t1;
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());

  std::vector<double> grid = run.thresholds;
  if (grid.empty()) {
    grid.reserve(2 * n);
    grid.insert(grid.end(), s0.begin(), s0.end());
    grid.insert(grid.end(), s1.begin(), s1.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  } else {
    std::sort(grid.begin(), grid.end());
  }

  RocCurve curve;
  curve.trials = run.trials;
  curve.points.reserve(grid.size() + 2);
  double inf = std::numeric_limits<double>::infinity();
  curve.points.push_back({inf, 0.0, 0.0, 0.0, 0.0});
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    RocPoint p;
    p.threshold = *it;
    p.pfa = detail::exceed_fraction(s0, *it);
    p.pd = detail::exceed_fraction(s1, *it);
    p.se_pfa = detail::binomial_se(p.pfa, run.trials);
    p.se_pd = detail::binomial_se(p.pd, run.trials);
    curve.points.push_back(p);
  }
  curve.points.push_back({-inf, 1.0, 1.0, 0.0, 0.0});
  return curve;
}

// Detection probability at the largest achieved false-alarm rate <= pfa.
inline RocPoint pd_at_pfa(const RocCurve& curve, double pfa) {
  if (curve.points.empty()) throw ValidationError("pd_at_pfa: empty curve");
  RocPoint best = curve.points.front();
  for (const RocPoint& p : curve.points)
    if (p.pfa <= pfa && p.pfa >= best.pfa) best = p;
  return best;
}

// Mixture-posterior conditional mean: x_hat = sum_l w_l(y) Q_m S^H
// Sigma_l^{-1} y with log-domain posterior weights.
class MmseEstimator {
 public:
  MmseEstimator(const CMatrix& s_matrix, const GmdModel& target, const GmdModel& clutter)
      : sm_(s_matrix) {
    composite_ = composite_covariances(s_matrix, target, clutter);
    for (const CompositeEntry& e : composite_.entries) {
      chol_.emplace_back(e.sigma, "composite");
      log_gamma_.push_back(std::log(e.weight));
      cross_.push_back(target.components[static_cast<std::size_t>(e.target_index)].covariance *
                       s_matrix.adjoint());
    }
    dim_ = static_cast<int>(s_matrix.rows());
  }

  CVector estimate(const CVector& y) const {
    if (y.size() != dim_) throw ValidationError("mmse: dimension mismatch");
    std::size_t l_count = chol_.size();
    std::vector<double> logw(l_count);
    std::vector<CVector> solved(l_count);
    for (std::size_t l = 0; l < l_count; ++l) {
      solved[l] = chol_[l].solve(y);
      double quad = (y.adjoint() * solved[l]).value().real();
      logw[l] = log_gamma_[l] - quad - dim_ * std::log(kPi) - chol_[l].log_det();
    }
    double norm = log_sum_exp(logw);
    CVector xhat = CVector::Zero(sm_.cols());
    for (std::size_t l = 0; l < l_count; ++l)
      xhat += std::exp(logw[l] - norm) * (cross_[l] * solved[l]);
    return xhat;
  }

 private:
  CMatrix sm_;
  CompositeLikelihood composite_;
  std::vector<HermitianCholesky> chol_;
  std::vector<double> log_gamma_;
  std::vector<CMatrix> cross_;
  int dim_ = 0;
};

inline CVector mmse_estimate(const CVector& y, const CMatrix& s_matrix,
                             const GmdModel& target, const GmdModel& clutter) {
  return MmseEstimator(s_matrix, target, clutter).estimate(y);
}

struct EstimationRun {
  Scenario scenario;
  Waveform waveform;
  int trials = 10000;
  std::uint64_t seed = 0;
};

struct EstimationResult {
  double mse = 0.0;
  double se = 0.0;
  int trials = 0;
};

// Monte-Carlo MSE of the conditional-mean reconstruction. Trial draws are
// functions of (seed, trial) only, so waveforms evaluated under one seed
// see identical targets and clutter.
inline EstimationResult mse_run(const EstimationRun& run, unsigned threads = 1) {
  check_scenario_shape(run.scenario);
  if (run.trials < 1) throw ValidationError("mse: trial count must be positive");
  CMatrix sm = convolution_matrix_of(run.waveform.samples, run.scenario.tir_length());
  MmseEstimator est(sm, run.scenario.target, run.scenario.clutter);
  GmdSampler target_sampler(run.scenario.target, "target");
  GmdSampler clutter_sampler(run.scenario.clutter, "clutter");

  std::size_t n = static_cast<std::size_t>(run.trials);
  std::vector<double> err(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng r(derive_seed(run.seed, "est", i));
    CVector x = target_sampler.sample(r);
    CVector w = clutter_sampler.sample(r);
    CVector y = sm * x + w;
    err[i] = (est.estimate(y) - x).squaredNorm();
  });

  EstimationResult out;
  out.trials = run.trials;
  out.mse = pairwise_sum(err) / static_cast<double>(n);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (err[i] - out.mse) * (err[i] - out.mse);
  double var = pairwise_sum(dev) / std::max<double>(1.0, static_cast<double>(n - 1));
  out.se = std::sqrt(var / static_cast<double>(n));
  return out;
}

// Analytic MMSE for the single-Gaussian case: tr(Q - Q S^H Sigma^{-1} S Q).
inline double gaussian_mmse(const CMatrix& s_matrix, const CMatrix& q, const CMatrix& r) {
  CMatrix sigma = hermitian_part(s_matrix * q * s_matrix.adjoint()) + r;
  HermitianCholesky cs(sigma, "gaussian_mmse");
  CMatrix sq = s_matrix * q;
  return (q - q * s_matrix.adjoint() * cs.solve(sq)).trace().real();
}

struct MseRow {
  double scr_db = 0.0;
  std::string label;
  double mse = 0.0;
  double se = 0.0;
  int trials = 0;
};

struct LabeledWaveform {
  std::string label;
  Waveform waveform;
};

// MSE table over an SCR grid with common random numbers across waveforms.
inline std::vector<MseRow> mse_vs_scr(const Scenario& base,
                                      const std::vector<LabeledWaveform>& waveforms,
                                      const std::vector<double>& scr_grid_db, int trials,
                                      std::uint64_t seed, unsigned threads = 1) {
  if (waveforms.empty()) throw ValidationError("mse_vs_scr: no waveforms");
  std::vector<MseRow> rows;
  for (double scr : scr_grid_db) {
    Scenario sc = base;
    sc.scr_db = scr;
    sc = calibrated(sc);
    for (const LabeledWaveform& lw : waveforms) {
      EstimationResult res = mse_run({sc, lw.waveform, trials, seed}, threads);
      rows.push_back({scr, lw.label, res.mse, res.se, res.trials});
    }
  }
  return rows;
}

struct Autocorrelation {
  std::vector<int> lags;        // -(N-1) .. N-1
  std::vector<cdouble> values;  // r(lag)
  double psl_db = 0.0;
};

inline Autocorrelation autocorrelation(const Waveform& w) {
  Eigen::Index n = w.samples.size();
  if (n < 1) throw ValidationError("autocorrelation: empty waveform");
  Autocorrelation out;
  double peak = 0.0, side = 0.0;
  for (Eigen::Index lag = -(n - 1); lag <= n - 1; ++lag) {
    cdouble acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index j = i - lag;
      if (j >= 0 && j < n) acc += w.samples(i) * std::conj(w.samples(j));
    }
    out.lags.push_back(static_cast<int>(lag));
    out.values.push_back(acc);
    if (lag == 0)
      peak = std::abs(acc);
    else
      side = std::max(side, std::abs(acc));
  }
  out.psl_db = 20.0 * std::log10(side / peak);
  return out;
}

struct AmbiguitySurface {
  std::vector<int> delays;
  std::vector<double> doppler;
  Eigen::MatrixXd magnitude;  // delays x doppler, 1 at (0, 0)
};

inline std::vector<double> doppler_grid(int points = 129) {
  if (points < 1) throw ValidationError("doppler_grid: need at least one point");
  std::vector<double> g(static_cast<std::size_t>(points));
  if (points == 1) {
    g[0] = 0.0;
    return g;
  }
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = -0.5 + static_cast<double>(i) / (points - 1);
  return g;
}

// chi(tau, nu) = sum_n s_n s*_{n-tau} e^{j 2 pi nu n}, magnitude normalized
// by the zero-delay zero-Doppler peak.
inline AmbiguitySurface ambiguity(const Waveform& w, const std::vector<double>& doppler) {
  if (doppler.empty()) throw ValidationError("ambiguity: empty Doppler grid");
  Eigen::Index n = w.samples.size();
  AmbiguitySurface out;
  out.doppler = doppler;
  for (Eigen::Index lag = -(n - 1); lag <= n - 1; ++lag)
    out.delays.push_back(static_cast<int>(lag));
  out.magnitude.resize(static_cast<Eigen::Index>(out.delays.size()),
                       static_cast<Eigen::Index>(doppler.size()));
  // Same accumulation order as the grid loop, so the (0, 0) cell divides to
  // exactly 1.
  cdouble p0(0.0, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) p0 += w.samples(i) * std::conj(w.samples(i));
  double peak = std::abs(p0);
  for (std::size_t di = 0; di < out.delays.size(); ++di) {
    Eigen::Index lag = out.delays[di];
    for (std::size_t vi = 0; vi < doppler.size(); ++vi) {
      cdouble acc(0.0, 0.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index j = i - lag;
        if (j >= 0 && j < n) {
          double ang = kTwoPi * doppler[vi] * static_cast<double>(i);
          acc += w.samples(i) * std::conj(w.samples(j)) * cdouble(std::cos(ang), std::sin(ang));
        }
      }
      out.magnitude(static_cast<Eigen::Index>(di), static_cast<Eigen::Index>(vi)) =
          std::abs(acc) / peak;
    }
  }
  return out;
}

}  // namespace infowave

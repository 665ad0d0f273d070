// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "infowave/common.hpp"
#include "infowave/gmd_model.hpp"
#include "infowave/linalg.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

// One mixture component of the signal-present receive distribution:
// sigma = S Q_m S^H + R_k with weight alpha_k * beta_m. Entries are ordered
// l = k * M + m (zero-based; clutter index major).
struct CompositeEntry {
  double weight = 0.0;
  CMatrix sigma;
  int clutter_index = 0;
  int target_index = 0;
};

struct CompositeLikelihood {
  std::vector<CompositeEntry> entries;
};

// F = d_bar + e_bar (nats). matches[l] is the zero-based clutter component
// selected by the divergence matching for entry l.
struct ObjectiveBreakdown {
  double f_total = 0.0;
  double d_bar = 0.0;
  double e_bar = 0.0;
  std::vector<int> matches;
};

inline CompositeLikelihood composite_covariances(const CMatrix& s_matrix,
                                                 const GmdModel& target,
                                                 const GmdModel& clutter) {
  check_model_shape(target, "target");
  check_model_shape(clutter, "clutter");
  if (s_matrix.cols() != target.dim())
    throw ValidationError("composite: matrix has " + std::to_string(s_matrix.cols()) +
                          " columns but target dimension is " + std::to_string(target.dim()));
  if (s_matrix.rows() != clutter.dim())
    throw ValidationError("composite: matrix has " + std::to_string(s_matrix.rows()) +
                          " rows but clutter dimension is " + std::to_string(clutter.dim()));
  CompositeLikelihood out;
  out.entries.reserve(clutter.components.size() * target.components.size());
  for (std::size_t k = 0; k < clutter.components.size(); ++k) {
    for (std::size_t m = 0; m < target.components.size(); ++m) {
      CompositeEntry e;
      e.weight = clutter.components[k].weight * target.components[m].weight;
      e.sigma = hermitian_part(s_matrix * target.components[m].covariance * s_matrix.adjoint()) +
                clutter.components[k].covariance;
      e.clutter_index = static_cast<int>(k);
      e.target_index = static_cast<int>(m);
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

inline CompositeLikelihood composite_covariances(const ConvolutionMatrix& s,
                                                 const GmdModel& target,
                                                 const GmdModel& clutter) {
  return composite_covariances(s.matrix, target, clutter);
}

// The composite likelihood as a mixture model in its own right.
inline GmdModel to_model(const CompositeLikelihood& composite) {
  GmdModel m;
  for (const CompositeEntry& e : composite.entries)
    m.components.push_back({e.weight, e.sigma});
  return m;
}

// tr(B^{-1}A) - log det(B^{-1}A) - n for zero-mean complex Gaussians.
inline double gaussian_kl(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("gaussian_kl: dimension mismatch");
  HermitianCholesky cb(b, "gaussian_kl B");
  double logdet_a = logdet_hermitian_pd(a, "gaussian_kl A");
  double tr = cb.solve_trace(hermitian_part(a));
  return tr - (logdet_a - cb.log_det()) - static_cast<double>(a.rows());
}

// log[sum_k alpha_k / det R_k] - log[sum_l gamma_l / det Sigma_l], both via
// log-sum-exp; det^{-1} would underflow at realistic dimensions.
inline double mi_approx(const CompositeLikelihood& composite, const GmdModel& clutter) {
  check_model_shape(clutter, "clutter");
  if (composite.entries.empty()) throw ValidationError("mi_approx: empty composite");
  std::vector<double> num;
  num.reserve(clutter.components.size());
  for (const GaussianComponent& c : clutter.components)
    num.push_back(std::log(c.weight) - logdet_hermitian_pd(c.covariance, "clutter covariance"));
  std::vector<double> den;
  den.reserve(composite.entries.size());
  for (const CompositeEntry& e : composite.entries)
    den.push_back(std::log(e.weight) - logdet_hermitian_pd(e.sigma, "composite covariance"));
  return log_sum_exp(num) - log_sum_exp(den);
}

// Divergence part via component matching: for each entry l the clutter
// component minimizing J(k, l) = log(gamma_l / alpha_k) + KL(Sigma_l || R_k)
// is selected (ties break to the smallest k).
inline std::pair<double, std::vector<int>> kl_approx(const CompositeLikelihood& composite,
                                                     const GmdModel& clutter) {
  check_model_shape(clutter, "clutter");
  if (composite.entries.empty()) throw ValidationError("kl_approx: empty composite");
  std::vector<int> matches;
  matches.reserve(composite.entries.size());
  double d_bar = 0.0;
  for (const CompositeEntry& e : composite.entries) {
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (std::size_t k = 0; k < clutter.components.size(); ++k) {
      double j = std::log(e.weight / clutter.components[k].weight) +
                 gaussian_kl(e.sigma, clutter.components[k].covariance);
      if (j < best) {
        best = j;
        best_k = static_cast<int>(k);
      }
    }
    matches.push_back(best_k);
    d_bar += e.weight * best;
  }
  return {d_bar, matches};
}

// Cached per-scenario state for repeated objective evaluations: clutter
// factorizations, cross traces tr(R_k'^{-1} R_k) and target factors are
// waveform-independent.
class MiubObjective {
 public:
  explicit MiubObjective(const Scenario& scenario) : scenario_(calibrated_or_checked(scenario)) {
    const auto& cl = scenario_.clutter.components;
    const auto& tg = scenario_.target.components;
    nk_ = cl.size();
    nm_ = tg.size();
    dim_ = scenario_.receive_dim();
    for (std::size_t k = 0; k < nk_; ++k) {
      chol_r_.emplace_back(cl[k].covariance, "clutter covariance");
      log_alpha_.push_back(std::log(cl[k].weight));
    }
    rr_trace_.resize(nk_ * nk_);
    for (std::size_t kp = 0; kp < nk_; ++kp)
      for (std::size_t k = 0; k < nk_; ++k)
        rr_trace_[kp * nk_ + k] =
            kp == k ? static_cast<double>(dim_)
                    : chol_r_[kp].solve_trace(hermitian_part(cl[k].covariance));
    for (std::size_t m = 0; m < nm_; ++m) {
      target_factor_.push_back(psd_sqrt_factor(tg[m].covariance, "target covariance"));
      log_beta_.push_back(std::log(tg[m].weight));
    }
  }

  const Scenario& scenario() const { return scenario_; }

  ObjectiveBreakdown breakdown(const Waveform& w) const {
    if (static_cast<int>(w.phases.size()) != scenario_.code_length)
      throw ValidationError("objective: waveform length mismatch");
    CMatrix sm = convolution_matrix_of(w.samples, scenario_.tir_length());

    // B_m = S G_m so that S Q_m S^H = B_m B_m^H.
    std::vector<CMatrix> b(nm_);
    for (std::size_t m = 0; m < nm_; ++m) b[m] = sm * target_factor_[m];

    std::vector<double> logdet_sigma(nk_ * nm_);
    std::vector<double> log_gamma(nk_ * nm_);
    for (std::size_t k = 0; k < nk_; ++k) {
      for (std::size_t m = 0; m < nm_; ++m) {
        CMatrix sigma = hermitian_part(b[m] * b[m].adjoint()) +
                        scenario_.clutter.components[k].covariance;
        HermitianCholesky cs(sigma, "composite covariance");
        std::size_t l = k * nm_ + m;
        logdet_sigma[l] = cs.log_det();
        log_gamma[l] = log_alpha_[k] + log_beta_[m];
      }
    }

    std::vector<double> num(nk_), den(nk_ * nm_);
    for (std::size_t k = 0; k < nk_; ++k) num[k] = log_alpha_[k] - chol_r_[k].log_det();
    for (std::size_t l = 0; l < den.size(); ++l) den[l] = log_gamma[l] - logdet_sigma[l];

    ObjectiveBreakdown out;
    out.e_bar = log_sum_exp(num) - log_sum_exp(den);

    // tr(R_k'^{-1} Sigma_l) = ||L_k'^{-1} B_m||_F^2 + tr(R_k'^{-1} R_k).
    std::vector<double> bt(nk_ * nm_);
    for (std::size_t kp = 0; kp < nk_; ++kp)
      for (std::size_t m = 0; m < nm_; ++m)
        bt[kp * nm_ + m] = chol_r_[kp].solve_trace_gram(b[m]);

    out.d_bar = 0.0;
    out.matches.reserve(nk_ * nm_);
    for (std::size_t k = 0; k < nk_; ++k) {
      for (std::size_t m = 0; m < nm_; ++m) {
        std::size_t l = k * nm_ + m;
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (std::size_t kp = 0; kp < nk_; ++kp) {
          double tr = bt[kp * nm_ + m] + rr_trace_[kp * nk_ + k];
          double kl = tr - (logdet_sigma[l] - chol_r_[kp].log_det()) -
                      static_cast<double>(dim_);
          double j = log_gamma[l] - log_alpha_[kp] + kl;
          if (j < best) {
            best = j;
            best_k = static_cast<int>(kp);
          }
        }
        out.matches.push_back(best_k);
        out.d_bar += std::exp(log_gamma[l]) * best;
      }
    }
    out.f_total = out.d_bar + out.e_bar;
    return out;
  }

  double value(const Waveform& w) const { return breakdown(w).f_total; }

 private:
  static Scenario calibrated_or_checked(const Scenario& sc) {
    check_scenario_shape(sc);
    return sc;
  }

  Scenario scenario_;
  std::size_t nk_ = 0, nm_ = 0;
  Eigen::Index dim_ = 0;
  std::vector<HermitianCholesky> chol_r_;
  std::vector<CMatrix> target_factor_;
  std::vector<double> log_alpha_, log_beta_;
  std::vector<double> rr_trace_;
};

inline ObjectiveBreakdown miub_objective(const Waveform& w, const Scenario& scenario) {
  return MiubObjective(scenario).breakdown(w);
}

// Output power ratio 10 log10(tr(S Qbar S^H) / tr(Rbar)) in dB.
inline double scr_objective(const Waveform& w, const Scenario& scenario) {
  check_scenario_shape(scenario);
  CMatrix sm = convolution_matrix_of(w.samples, scenario.tir_length());
  CMatrix qbar = CMatrix::Zero(scenario.tir_length(), scenario.tir_length());
  for (const GaussianComponent& c : scenario.target.components)
    qbar += c.weight * c.covariance;
  double num = (sm * qbar).cwiseProduct(sm.conjugate()).sum().real();
  double den = 0.0;
  for (const GaussianComponent& c : scenario.clutter.components)
    den += c.weight * c.covariance.trace().real();
  if (!(num > 0.0) || !(den > 0.0))
    throw CalibrationError("scr_objective: nonpositive power ratio");
  return 10.0 * std::log10(num / den);
}

// w * scr + (1 - w) * mi, the weighted-sum benchmark objective.
inline double wsm_objective(const Waveform& w, const Scenario& scenario, double weight = 0.5) {
  if (!(weight >= 0.0 && weight <= 1.0))
    throw ValidationError("wsm_objective: weight outside [0, 1]");
  MiubObjective obj(scenario);
  double mi = obj.breakdown(w).e_bar;
  if (weight == 0.0) return mi;
  return weight * scr_objective(w, scenario) + (1.0 - weight) * mi;
}

// Covariance-map Lipschitz constant 2 N_T sqrt(E_s) lambda_max.
inline double lipschitz_local_bound(int n_t, double energy, double lambda_max) {
  return 2.0 * n_t * std::sqrt(energy) * lambda_max;
}

// Scenario form: lambda_max is the measured largest eigenvalue across the
// target components, which is what the covariance difference depends on.
inline double lipschitz_local_bound(const Scenario& scenario) {
  check_scenario_shape(scenario);
  double lam = 0.0;
  for (const GaussianComponent& c : scenario.target.components) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c.covariance));
    lam = std::max(lam, es.eigenvalues().maxCoeff());
  }
  return lipschitz_local_bound(scenario.tir_length(), scenario.energy, lam);
}

enum class ObjectiveKind { kMiub, kMi, kWsm, kRpc };

inline std::string to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::kMiub: return "miub";
    case ObjectiveKind::kMi: return "mi";
    case ObjectiveKind::kWsm: return "wsm";
    case ObjectiveKind::kRpc: return "rpc";
  }
  return "unknown";
}

// Fitness closure for the optimizers; shares one cached engine.
inline std::function<double(const Waveform&)> make_fitness(const Scenario& scenario,
                                                           ObjectiveKind kind,
                                                           double wsm_weight = 0.5) {
  auto engine = std::make_shared<MiubObjective>(scenario);
  switch (kind) {
    case ObjectiveKind::kMiub:
      return [engine](const Waveform& w) { return engine->value(w); };
    case ObjectiveKind::kMi:
      return [engine](const Waveform& w) { return engine->breakdown(w).e_bar; };
    case ObjectiveKind::kWsm: {
      if (!(wsm_weight >= 0.0 && wsm_weight <= 1.0))
        throw ValidationError("wsm weight outside [0, 1]");
      if (wsm_weight == 0.0)
        return [engine](const Waveform& w) { return engine->breakdown(w).e_bar; };
      return [engine, wsm_weight](const Waveform& w) {
        double mi = engine->breakdown(w).e_bar;
        return wsm_weight * scr_objective(w, engine->scenario()) + (1.0 - wsm_weight) * mi;
      };
    }
    case ObjectiveKind::kRpc:
      throw ValidationError("rpc is not an optimizable objective");
  }
  throw ValidationError("unknown objective kind");
}

}  // namespace infowave

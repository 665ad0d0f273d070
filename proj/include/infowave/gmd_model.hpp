// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "infowave/common.hpp"
#include "infowave/linalg.hpp"

namespace infowave {

// Synthetic power spectral density: a sum of Gaussian-shaped bands on the
// normalized frequency circle [-0.5, 0.5), plus a flat floor. The floor is
// equivalent to diagonal loading of the resulting covariance.
struct PsdBand {
  double center = 0.0;
  double width = 0.1;
  double power = 1.0;
};

struct PsdSpec {
  std::vector<PsdBand> bands;
  int dim = 0;
  double floor = 0.0;
};

inline void check_psd_spec(const PsdSpec& spec) {
  if (spec.bands.empty()) throw ValidationError("psd: empty band list");
  if (spec.dim < 1) throw ValidationError("psd: dimension must be positive");
  if (!(spec.floor >= 0.0) || !std::isfinite(spec.floor))
    throw ValidationError("psd: floor must be finite and nonnegative");
  for (const PsdBand& b : spec.bands) {
    if (!(b.width > 0.0)) throw ValidationError("psd: band width must be positive");
    if (!(b.power >= 0.0)) throw ValidationError("psd: band power must be nonnegative");
    if (!(b.center >= -0.5) || !(b.center < 0.5))
      throw ValidationError("psd: band center must lie in [-0.5, 0.5)");
  }
}

// PSD sampled at bin f = i / n on the frequency circle. Bands are wrapped
// Gaussians with unit integral, scaled by their power.
inline double psd_value(const PsdSpec& spec, double f) {
  double v = spec.floor;
  for (const PsdBand& b : spec.bands) {
    double sigma = b.width;
    int reach = static_cast<int>(std::ceil(6.0 * sigma)) + 1;
    double g = 0.0;
    for (int a = -reach; a <= reach; ++a) {
      double d = f - b.center + static_cast<double>(a);
      g += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    v += b.power * g / (sigma * std::sqrt(kTwoPi));
  }
  return v;
}

struct GaussianComponent {
  double weight = 0.0;
  CMatrix covariance;
};

struct GmdModel {
  std::vector<GaussianComponent> components;

  int dim() const {
    return components.empty() ? 0 : static_cast<int>(components.front().covariance.rows());
  }
};

inline void check_model_shape(const GmdModel& model, std::string_view label = "model") {
  if (model.components.empty())
    throw ValidationError(std::string(label) + ": mixture has no components");
  Eigen::Index d = model.components.front().covariance.rows();
  double wsum = 0.0;
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const GaussianComponent& c = model.components[i];
    if (c.covariance.rows() != c.covariance.cols() || c.covariance.rows() != d)
      throw ValidationError(std::string(label) + ": component " + std::to_string(i) +
                            " has inconsistent dimension");
    if (!(c.weight > 0.0))
      throw ValidationError(std::string(label) + ": component " + std::to_string(i) +
                            " has non-positive weight");
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw ValidationError(std::string(label) + ": weights sum to " + format_full(wsum));
}

// Mixture second moment: sum of weight * tr(covariance).
inline double total_power(const GmdModel& model) {
  double p = 0.0;
  for (const GaussianComponent& c : model.components)
    p += c.weight * c.covariance.trace().real();
  return p;
}

// Hermitian Toeplitz covariance whose first column is the inverse DFT of
// the sampled PSD. The floor's contribution is exactly floor * I.
inline CMatrix synth_covariance_from_psd(const PsdSpec& spec, double lambda_min = 1e-8,
                                         double lambda_max = 1e8) {
  check_psd_spec(spec);
  int n = spec.dim;
  std::vector<double> psd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double f = static_cast<double>(i) / n;
    if (f >= 0.5) f -= 1.0;
    psd[static_cast<std::size_t>(i)] = psd_value(spec, f);
    if (!(psd[static_cast<std::size_t>(i)] > 0.0))
      throw ModelError("psd: sampled spectrum not strictly positive at bin " +
                       std::to_string(i));
  }
  CVector col(n);
  for (int tau = 0; tau < n; ++tau) {
    cdouble acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      double ang = kTwoPi * static_cast<double>(i) * tau / n;
      acc += psd[static_cast<std::size_t>(i)] * cdouble(std::cos(ang), std::sin(ang));
    }
    col(tau) = acc / static_cast<double>(n);
  }
  CMatrix r = toeplitz_hermitian(col);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
  if (es.info() != Eigen::Success) throw ModelError("psd: eigendecomposition failed");
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0))
    throw ModelError("psd: covariance not positive definite (min eigenvalue " +
                     format_full(lo) + ")");
  if (lo < lambda_min || hi > lambda_max)
    throw ModelError("psd: eigenvalues [" + format_full(lo) + ", " + format_full(hi) +
                     "] outside configured bounds");
  return r;
}

// Scales every target covariance by one common factor so that
// 10*log10(target power / clutter power) hits scr_db exactly.
inline double scr_of(const GmdModel& target, const GmdModel& clutter) {
  double pt = total_power(target);
  double pc = total_power(clutter);
  if (!(pt > 0.0) || !(pc > 0.0))
    throw CalibrationError("scr: zero total power in target or clutter");
  return 10.0 * std::log10(pt / pc);
}

inline GmdModel calibrate_scr(const GmdModel& target, const GmdModel& clutter,
                              double scr_db) {
  check_model_shape(target, "target");
  check_model_shape(clutter, "clutter");
  double pt = total_power(target);
  double pc = total_power(clutter);
  if (!(pt > 0.0) || !(pc > 0.0))
    throw CalibrationError("calibrate_scr: zero total power in target or clutter");
  double scale = std::pow(10.0, scr_db / 10.0) * pc / pt;
  GmdModel out = target;
  for (GaussianComponent& c : out.components) c.covariance *= scale;
  return out;
}

// Pure diagnostics; callers decide what a failure means.
struct ComponentDiagnostics {
  double hermitian_deviation = 0.0;
  double eig_min = 0.0;
  double eig_max = 0.0;
  bool pass = false;
};

struct ModelDiagnostics {
  double weight_sum = 0.0;
  bool weights_pass = false;
  std::vector<ComponentDiagnostics> components;
  bool pass = false;
  int first_failing_component = -1;
};

inline ModelDiagnostics validate_model(const GmdModel& model, double lambda_min = 1e-8,
                                       double lambda_max = 1e8) {
  ModelDiagnostics d;
  for (const GaussianComponent& c : model.components) d.weight_sum += c.weight;
  d.weights_pass = std::abs(d.weight_sum - 1.0) <= 1e-12;
  for (const GaussianComponent& c : model.components) {
    ComponentDiagnostics cd;
    double scale = std::max(c.covariance.norm(), 1e-300);
    cd.hermitian_deviation = (c.covariance - c.covariance.adjoint()).norm() / scale;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c.covariance));
    cd.eig_min = es.eigenvalues().minCoeff();
    cd.eig_max = es.eigenvalues().maxCoeff();
    cd.pass = cd.hermitian_deviation <= 1e-10 && c.weight > 0.0 &&
              cd.eig_min >= lambda_min && cd.eig_max <= lambda_max;
    d.components.push_back(cd);
  }
  d.pass = d.weights_pass;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    if (!d.components[i].pass) {
      d.pass = false;
      if (d.first_failing_component < 0) d.first_failing_component = static_cast<int>(i);
    }
  }
  return d;
}

// Full experiment scenario. Clutter lives in the receive space of dimension
// code_length + tir_length - 1; target in the tap space of dimension
// tir_length. `calibrated` rescales the target to hit scr_db.
struct Scenario {
  GmdModel clutter;
  GmdModel target;
  int code_length = 0;
  double energy = 1.0;
  double scr_db = 0.0;

  int tir_length() const { return target.dim(); }
  int receive_dim() const { return code_length + tir_length() - 1; }
  double amplitude() const { return std::sqrt(energy / code_length); }
};

inline void check_scenario_shape(const Scenario& sc) {
  check_model_shape(sc.target, "target");
  check_model_shape(sc.clutter, "clutter");
  if (sc.code_length < 1) throw ValidationError("scenario: code length must be positive");
  if (!(sc.energy > 0.0)) throw ValidationError("scenario: energy must be positive");
  if (sc.clutter.dim() != sc.receive_dim())
    throw ValidationError("scenario: clutter dimension " + std::to_string(sc.clutter.dim()) +
                          " != code_length + tir_length - 1 = " +
                          std::to_string(sc.receive_dim()));
}

inline Scenario calibrated(const Scenario& sc) {
  check_scenario_shape(sc);
  Scenario out = sc;
  out.target = calibrate_scr(sc.target, sc.clutter, sc.scr_db);
  return out;
}

}  // namespace infowave

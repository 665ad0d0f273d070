// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "infowave/common.hpp"

namespace infowave {

// Exact Hermitian projection (A + A^H) / 2. Applied before any
// factorization so that round-off asymmetry never reaches the solvers.
inline CMatrix hermitian_part(const CMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

// Hermitian Toeplitz matrix from its first column; r(0) must be real.
inline CMatrix toeplitz_hermitian(const CVector& first_col) {
  Eigen::Index n = first_col.size();
  CMatrix t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::Index lag = i - j;
      t(i, j) = lag >= 0 ? first_col(lag) : std::conj(first_col(-lag));
    }
  }
  t.diagonal() = t.diagonal().real().template cast<cdouble>();
  return t;
}

// Cholesky factorization of a Hermitian positive definite matrix with a
// diagnostic failure path: on loss of positive definiteness the failing
// pivot index is recovered by an explicit unblocked pass.
class HermitianCholesky {
 public:
  explicit HermitianCholesky(const CMatrix& a, std::string_view label = "matrix") {
    if (a.rows() != a.cols())
      throw ValidationError(std::string(label) + ": matrix is not square");
    CMatrix h = hermitian_part(a);
    Eigen::LLT<CMatrix> llt(h);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(std::string(label) + ": not positive definite (pivot " +
                               std::to_string(failing_pivot(h)) + ")",
                           failing_pivot(h));
    }
    lower_ = llt.matrixL();
    log_det_ = 0.0;
    for (Eigen::Index i = 0; i < lower_.rows(); ++i) {
      double d = lower_(i, i).real();
      if (!(d > 0.0) || !std::isfinite(d))
        throw NumericalError(std::string(label) + ": not positive definite (pivot " +
                                 std::to_string(i) + ")",
                             static_cast<int>(i));
      log_det_ += 2.0 * std::log(d);
    }
  }

  const CMatrix& lower() const { return lower_; }
  double log_det() const { return log_det_; }
  Eigen::Index dim() const { return lower_.rows(); }

  // x = A^{-1} b via two triangular solves.
  CMatrix solve(const CMatrix& b) const {
    CMatrix x = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.adjoint().triangularView<Eigen::Upper>().solve(x);
  }

  CVector solve(const CVector& b) const {
    CVector x = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.adjoint().triangularView<Eigen::Upper>().solve(x);
  }

  // y^H A^{-1} y = || L^{-1} y ||^2; real and nonnegative by construction.
  double quad_form(const CVector& y) const {
    return lower_.triangularView<Eigen::Lower>().solve(y).squaredNorm();
  }

  // tr(A^{-1} B B^H) = || L^{-1} B ||_F^2 for any tall factor B.
  double solve_trace_gram(const CMatrix& b) const {
    return lower_.triangularView<Eigen::Lower>().solve(b).squaredNorm();
  }

  // tr(A^{-1} B) for Hermitian B.
  double solve_trace(const CMatrix& b) const {
    return solve(b).trace().real();
  }

 private:
  static int failing_pivot(const CMatrix& h) {
    Eigen::Index n = h.rows();
    CMatrix l = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double d = h(j, j).real() - l.row(j).head(j).squaredNorm();
      if (!(d > 0.0) || !std::isfinite(d)) return static_cast<int>(j);
      l(j, j) = std::sqrt(d);
      for (Eigen::Index i = j + 1; i < n; ++i) {
        cdouble s = h(i, j);
        for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
        l(i, j) = s / l(j, j);
      }
    }
    return static_cast<int>(n - 1);
  }

  CMatrix lower_;
  double log_det_;
};

// log det of a Hermitian positive definite matrix.
inline double logdet_hermitian_pd(const CMatrix& a, std::string_view label = "matrix") {
  return HermitianCholesky(a, label).log_det();
}

// Square-root factor F with F F^H = A for Hermitian positive semidefinite A.
// Falls back to an eigenvalue factor when A is singular; eigenvalues below
// -tol * max|lambda| are rejected, smaller negatives are clamped to zero.
inline CMatrix psd_sqrt_factor(const CMatrix& a, std::string_view label = "matrix") {
  if (a.rows() != a.cols())
    throw ValidationError(std::string(label) + ": matrix is not square");
  if (a.size() == 0) return a;
  CMatrix h = hermitian_part(a);
  Eigen::LLT<CMatrix> llt(h);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError(std::string(label) + ": eigendecomposition failed");
  RVector ev = es.eigenvalues();
  double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  double tol = 1e-10 * std::max(top, 1.0);
  RVector root(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol)
      throw NumericalError(std::string(label) + ": not positive semidefinite",
                           static_cast<int>(i));
    root(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * root.asDiagonal();
}

// log(sum_i exp(v_i)) guarded against overflow; -inf inputs are dropped.
inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

}  // namespace infowave

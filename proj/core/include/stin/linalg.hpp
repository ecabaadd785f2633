// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace stin {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

// x^H A x, real part only (A is Hermitian everywhere we call this).
inline double qf(const Mat& a, const Vec& x) { return x.dot(a * x).real(); }

// Unit-norm eigenvector for the largest eigenvalue of a Hermitian matrix.
inline Vec dominant_eigvec(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
  return es.eigenvectors().col(a.rows() - 1);
}

// Rotate x by the unit phasor that maximizes Re<x, ref>.
inline Vec align_phase(const Vec& x, const Vec& ref) {
  const cd c = x.dot(ref);
  const double m = std::abs(c);
  if (m == 0.0) return x;
  return x * (c / m);
}

// Real inner-product cosine between two complex vectors.
inline double real_cosine(const Vec& a, const Vec& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b).real() / (na * nb);
}

}  // namespace stin

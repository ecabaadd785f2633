// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/baselines.hpp"

#include <cmath>

namespace stin {

namespace {

// Leading generalized eigenvector of (S, T), T positive definite.
Vec slnr_direction(const Vec& h, const Mat& err, const Mat& leak) {
  if (h.norm() > 0.0) {
    Vec d = leak.ldlt().solve(h);
    return d / d.norm();
  }
  if (err.norm() == 0.0) {
    Vec e = Vec::Zero(h.size());
    e(0) = 1.0;
    return e;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(hermitize(err), hermitize(leak));
  Vec d = es.eigenvectors().col(h.size() - 1);
  return d / d.norm();
}

// Unit columns scaled so the whole matrix has unit Frobenius norm.
Mat equal_power(Mat X) {
  const auto n = static_cast<double>(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double c = X.col(j).norm();
    if (c > 0.0) X.col(j) /= c * std::sqrt(n);
  }
  return X;
}

}  // namespace

Mat zero_forcing(const Mat& H, bool* regularized) {
  const Mat gram = H.adjoint() * H;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(gram), Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  const bool deficient = H.cols() > H.rows() || !(lmax > 0.0) || lmin <= 1e-12 * lmax;
  if (regularized) *regularized = deficient;
  if (!deficient) return H * gram.ldlt().solve(Mat::Identity(H.cols(), H.cols()));
  const double delta = 1e-6 * std::max(lmax, 1e-300);
  const Mat reg = gram + delta * Mat::Identity(H.cols(), H.cols());
  return H * reg.ldlt().solve(Mat::Identity(H.cols(), H.cols()));
}

BaselinePrecoders slnr_max(const CsitEstimate& csit, const SystemConfig& cfg) {
  const auto M = csit.G.rows(), Ks = csit.G.cols();
  const auto N = csit.H.rows(), Kt = csit.H.cols();
  const double Ps = cfg.Ps(), Pt = cfg.Pt(), s2 = cfg.noise_var();

  BaselinePrecoders out;
  out.V = Mat::Zero(N, Kt);
  for (Eigen::Index k = 0; k < Kt; ++k) {
    Mat leak = (s2 / Pt) * static_cast<double>(Kt) * Mat::Identity(N, N);
    for (Eigen::Index j = 0; j < Kt; ++j)
      if (j != k) leak += csit.H.col(j) * csit.H.col(j).adjoint() + csit.phi_bs[j];
    out.V.col(k) = slnr_direction(csit.H.col(k), csit.phi_bs[k], leak);
  }

  Mat cross = Mat::Zero(M, M);
  for (Eigen::Index k = 0; k < Kt; ++k)
    cross += csit.Z.col(k) * csit.Z.col(k).adjoint() + csit.phi_sat[k];
  out.F = Mat::Zero(M, Ks);
  for (Eigen::Index u = 0; u < Ks; ++u) {
    Mat leak = (Pt / Ps) * cross + (s2 / Ps) * static_cast<double>(Ks) * Mat::Identity(M, M);
    for (Eigen::Index i = 0; i < Ks; ++i)
      if (i != u) leak += csit.G.col(i) * csit.G.col(i).adjoint() + csit.psi_su[i];
    out.F.col(u) = slnr_direction(csit.G.col(u), csit.psi_su[u], leak);
  }
  out.F = equal_power(out.F);
  out.V = equal_power(out.V);
  return out;
}

BaselinePrecoders zf_single_cell(const CsitEstimate& csit, const SystemConfig&) {
  BaselinePrecoders out;
  bool reg_f = false, reg_v = false;
  out.F = equal_power(zero_forcing(csit.G, &reg_f));
  out.V = equal_power(zero_forcing(csit.H, &reg_v));
  out.regularized = reg_f || reg_v;
  return out;
}

BaselinePrecoders zf_local(const CsitEstimate& csit, const SystemConfig& cfg) {
  const auto Ks = csit.G.cols();
  int n_int = 0;
  for (bool b : csit.interfered) n_int += b ? 1 : 0;
  if (n_int == 0) return zf_single_cell(csit, cfg);

  Mat aug(csit.G.rows(), Ks + n_int);
  aug.leftCols(Ks) = csit.G;
  int c = 0;
  for (std::size_t k = 0; k < csit.interfered.size(); ++k)
    if (csit.interfered[k]) aug.col(Ks + c++) = csit.Z.col(static_cast<Eigen::Index>(k));

  BaselinePrecoders out;
  bool reg_f = false, reg_v = false;
  out.F = equal_power(zero_forcing(aug, &reg_f).leftCols(Ks));
  out.V = equal_power(zero_forcing(csit.H, &reg_v));
  out.regularized = reg_f || reg_v;
  return out;
}

}  // namespace stin

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <string>
#include <vector>

#include "stin/linalg.hpp"
#include "stin/random.hpp"
#include "stin/scenario.hpp"

namespace stin {

// a_h(theta, phi) kron a_v(theta), phase-centred on the array.
Vec upa_response(double theta, double phi, double d1, double d2, int n1, int n2);

// Long-term statistics of one placement. Everything per-block derives from this.
struct CovarianceSet {
  int M = 0, N = 0, Ks = 0, Kt = 0;
  double kappa = 0.0;
  Mat a_su;                    // M x Ks steering vectors
  Mat a_tu;                    // M x Kt, zero column for non-interfered TUs
  std::vector<Mat> bs_paths;   // per TU: N x Lt
  std::vector<double> alpha_su;
  std::vector<double> alpha_tu;
  std::vector<double> beta;
  std::vector<bool> interfered;
  std::vector<Mat> Q_su;       // M x M
  std::vector<Mat> R_sat;      // M x M, zero for non-interfered TUs
  std::vector<Mat> R_bs;       // N x N
};

CovarianceSet spatial_covariances(const SystemConfig& cfg, const UserPlacement& placement,
                                  const LinkBudget& gains);

struct ChannelRealization {
  Mat G;  // M x Ks
  Mat Z;  // M x Kt
  Mat H;  // N x Kt
  std::vector<bool> interfered;
};

ChannelRealization draw_channels(const CovarianceSet& covs, Rng& rng);

struct CsitEstimate {
  Mat G, Z, H;
  std::vector<Mat> psi_su;   // M x M
  std::vector<Mat> phi_sat;  // M x M
  std::vector<Mat> phi_bs;   // N x N
  std::vector<bool> interfered;
};

// R - R (R + s I)^{-1} R with s = noise / tau_p; handles tau_p = 0 and inf.
Mat mmse_error_covariance(const Mat& R, double noise_var, double tau_p);

CsitEstimate mmse_estimate(const ChannelRealization& real, const CovarianceSet& covs,
                           const SystemConfig& cfg, Rng& rng);

// Row-major "re+imj" tokens, one matrix row per line. Debug aid.
std::string format_matrix(const Mat& m);

}  // namespace stin

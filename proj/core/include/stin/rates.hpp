// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <vector>

#include "stin/channel.hpp"
#include "stin/linalg.hpp"
#include "stin/scenario.hpp"

namespace stin {

// f = [f_c; f_p,1; ...; f_p,Ks] (length M(Ks+1)), v = [v_1; ...; v_Kt] (length N Kt).
struct StackedPrecoders {
  Vec f;
  Vec v;
  int M = 0;
  int N = 0;
  double f_scale = 1.0;  // norm before normalization
  double v_scale = 1.0;
};

// F is M x (Ks+1) with the common beam first; V is N x Kt.
StackedPrecoders stack(const Mat& F, const Mat& V);
std::pair<Mat, Mat> unstack(const StackedPrecoders& p);

// Forms that only need satellite-side CSIT (G, Z estimates and their error
// covariances). Matrices are M(Ks+1) square.
struct SatelliteForms {
  int M = 0, Ks = 0, Kt = 0;
  std::vector<int> interfered;
  // one entry per interfered TU, in the order of `interfered`
  std::vector<Mat> S_c_bs, C_c_bs;
  // one entry per TU; identically zero for TUs outside the footprint
  std::vector<Mat> C_p_bs;
  // one entry per SU
  std::vector<Mat> S_c_sat, U_c_sat, S_p_sat, U_p_sat;

  int dim() const { return M * (Ks + 1); }
};

// Forms that only need BS-side CSIT. Matrices are N Kt square.
struct BsForms {
  int N = 0, Kt = 0;
  std::vector<int> interfered;
  std::vector<Mat> U_c_bs;          // per interfered TU
  std::vector<Mat> S_p_bs, U_p_bs;  // per TU
  // Every BS form is block diagonal in N x N blocks; the stage iterates on these.
  Mat h;                       // N x Kt estimates
  std::vector<Mat> cov_blocks; // per TU: h h^H + Phi_bs
  double noise = 0.0;          // sigma^2 / Pt

  int dim() const { return N * Kt; }
};

struct QuadraticFormSet {
  SatelliteForms sat;
  BsForms bs;
};

SatelliteForms build_satellite_forms(const CsitEstimate& csit, const SystemConfig& cfg);
BsForms build_bs_forms(const CsitEstimate& csit, const SystemConfig& cfg);
QuadraticFormSet build_quadratic_forms(const CsitEstimate& csit, const SystemConfig& cfg);

struct RateReport {
  double r_c = 0.0;
  std::vector<double> common_tu;  // per interfered TU
  std::vector<double> common_su;
  std::vector<double> r_p_su;
  std::vector<double> r_p_tu;
  double sum = 0.0;
};

// Jensen lower bounds from the quadratic forms. Precoders must be unit norm.
RateReport lower_bound_rates(const QuadraticFormSet& forms, const Vec& f, const Vec& v);

// Exact rates on the true channels. With rs_enabled F is M x (Ks+1) and
// column 0 is the common beam; otherwise F is M x Ks and r_c = 0.
RateReport true_instantaneous_rates(const ChannelRealization& real, const Mat& F, const Mat& V,
                                    const SystemConfig& cfg, bool rs_enabled);

// SU u gets r_p_su[u] + r_c / Ks; TUs get their private rate.
std::vector<double> per_user_rates(const RateReport& r);

}  // namespace stin

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stin {

namespace {

auto blk(Mat& m, int i, int j, int n) { return m.block(i * n, j * n, n, n); }

void check_unit(const Vec& x, const char* what) {
  if (std::abs(x.norm() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + " must have unit norm");
}

double log2_ratio(double num, double den) { return std::log2(num / den); }

}  // namespace

StackedPrecoders stack(const Mat& F, const Mat& V) {
  StackedPrecoders p;
  p.M = static_cast<int>(F.rows());
  p.N = static_cast<int>(V.rows());
  p.f = Eigen::Map<const Vec>(F.data(), F.size());
  p.v = Eigen::Map<const Vec>(V.data(), V.size());
  p.f_scale = p.f.norm();
  p.v_scale = p.v.norm();
  if (p.f_scale == 0.0 || p.v_scale == 0.0)
    throw std::invalid_argument("cannot stack an all-zero precoder");
  p.f /= p.f_scale;
  p.v /= p.v_scale;
  return p;
}

std::pair<Mat, Mat> unstack(const StackedPrecoders& p) {
  const auto fcols = p.f.size() / p.M;
  const auto vcols = p.v.size() / p.N;
  Mat F = Eigen::Map<const Mat>(p.f.data(), p.M, fcols);
  Mat V = Eigen::Map<const Mat>(p.v.data(), p.N, vcols);
  return {F, V};
}

SatelliteForms build_satellite_forms(const CsitEstimate& csit, const SystemConfig& cfg) {
  SatelliteForms s;
  s.M = static_cast<int>(csit.G.rows());
  s.Ks = static_cast<int>(csit.G.cols());
  s.Kt = static_cast<int>(csit.Z.cols());
  if (s.M != cfg.M() || s.Ks != cfg.Ks || s.Kt != cfg.Kt)
    throw std::invalid_argument("CSIT dimensions do not match the configuration");
  const int M = s.M, D = s.dim();
  const double r = cfg.Ps() / cfg.Pt();
  const double n_s = cfg.noise_var() / cfg.Ps();
  const Mat I = Mat::Identity(D, D);

  for (int k = 0; k < s.Kt; ++k) {
    const Vec z = csit.Z.col(k);
    const Mat zz = z * z.adjoint();
    const Mat tot = r * (zz + csit.phi_sat[k]);
    Mat cp = Mat::Zero(D, D);
    if (csit.interfered[k]) {
      s.interfered.push_back(k);
      Mat sc = Mat::Zero(D, D);
      blk(sc, 0, 0, M) = r * zz;
      Mat cc = Mat::Zero(D, D);
      for (int i = 0; i <= s.Ks; ++i) blk(cc, i, i, M) = tot;
      cc -= sc;
      s.S_c_bs.push_back(std::move(sc));
      s.C_c_bs.push_back(std::move(cc));
      for (int i = 1; i <= s.Ks; ++i) blk(cp, i, i, M) = tot;
    }
    s.C_p_bs.push_back(std::move(cp));
  }

  for (int u = 0; u < s.Ks; ++u) {
    const Vec g = csit.G.col(u);
    const Mat gg = g * g.adjoint();
    const Mat& psi = csit.psi_su[u];

    Mat sc = Mat::Zero(D, D);
    blk(sc, 0, 0, M) = gg;
    Mat uc = n_s * I;
    blk(uc, 0, 0, M) += psi;
    for (int i = 1; i <= s.Ks; ++i) blk(uc, i, i, M) += gg + psi;

    Mat sp = Mat::Zero(D, D);
    blk(sp, u + 1, u + 1, M) = gg;
    Mat up = n_s * I;
    for (int i = 1; i <= s.Ks; ++i) blk(up, i, i, M) += gg + psi;
    up -= sp;

    s.S_c_sat.push_back(std::move(sc));
    s.U_c_sat.push_back(std::move(uc));
    s.S_p_sat.push_back(std::move(sp));
    s.U_p_sat.push_back(std::move(up));
  }
  return s;
}

BsForms build_bs_forms(const CsitEstimate& csit, const SystemConfig& cfg) {
  BsForms b;
  b.N = static_cast<int>(csit.H.rows());
  b.Kt = static_cast<int>(csit.H.cols());
  if (b.N != cfg.N() || b.Kt != cfg.Kt)
    throw std::invalid_argument("CSIT dimensions do not match the configuration");
  const int N = b.N, D = b.dim();
  const double n_t = cfg.noise_var() / cfg.Pt();
  b.h = csit.H;
  b.noise = n_t;

  for (int k = 0; k < b.Kt; ++k) {
    const Vec h = csit.H.col(k);
    const Mat hh = h * h.adjoint();
    b.cov_blocks.push_back(hh + csit.phi_bs[k]);
    Mat uc = n_t * Mat::Identity(D, D);
    for (int j = 0; j < b.Kt; ++j) blk(uc, j, j, N) += hh + csit.phi_bs[k];
    Mat sp = Mat::Zero(D, D);
    blk(sp, k, k, N) = hh;
    Mat up = uc - sp;
    if (csit.interfered[k]) {
      b.interfered.push_back(k);
      b.U_c_bs.push_back(uc);
    }
    b.S_p_bs.push_back(std::move(sp));
    b.U_p_bs.push_back(std::move(up));
  }
  return b;
}

QuadraticFormSet build_quadratic_forms(const CsitEstimate& csit, const SystemConfig& cfg) {
  return {build_satellite_forms(csit, cfg), build_bs_forms(csit, cfg)};
}

RateReport lower_bound_rates(const QuadraticFormSet& forms, const Vec& f, const Vec& v) {
  check_unit(f, "f");
  check_unit(v, "v");
  const auto& s = forms.sat;
  const auto& b = forms.bs;
  RateReport r;
  double rc = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < s.interfered.size(); ++i) {
    const double vu = qf(b.U_c_bs[i], v);
    const double c = qf(s.C_c_bs[i], f);
    const double sig = qf(s.S_c_bs[i], f);
    r.common_tu.push_back(log2_ratio(vu + sig + c, vu + c));
    rc = std::min(rc, r.common_tu.back());
  }
  for (int u = 0; u < s.Ks; ++u) {
    const double uc = qf(s.U_c_sat[u], f);
    r.common_su.push_back(log2_ratio(qf(s.S_c_sat[u], f) + uc, uc));
    rc = std::min(rc, r.common_su.back());
    const double up = qf(s.U_p_sat[u], f);
    r.r_p_su.push_back(log2_ratio(qf(s.S_p_sat[u], f) + up, up));
  }
  for (int k = 0; k < b.Kt; ++k) {
    const double leak = qf(s.C_p_bs[k], f);
    const double up = qf(b.U_p_bs[k], v);
    r.r_p_tu.push_back(log2_ratio(qf(b.S_p_bs[k], v) + up + leak, up + leak));
  }
  r.r_c = std::isinf(rc) ? 0.0 : rc;
  r.sum = r.r_c;
  for (double x : r.r_p_su) r.sum += x;
  for (double x : r.r_p_tu) r.sum += x;
  return r;
}

RateReport true_instantaneous_rates(const ChannelRealization& real, const Mat& F, const Mat& V,
                                    const SystemConfig& cfg, bool rs_enabled) {
  const Eigen::Index Ks = real.G.cols(), Kt = real.H.cols();
  if (F.cols() != Ks + (rs_enabled ? 1 : 0) || F.rows() != real.G.rows())
    throw std::invalid_argument("satellite precoder has the wrong shape");
  if (V.cols() != Kt || V.rows() != real.H.rows())
    throw std::invalid_argument("BS precoder has the wrong shape");
  if (F.squaredNorm() > 1.0 + 1e-9 || V.squaredNorm() > 1.0 + 1e-9)
    throw std::invalid_argument("precoder violates the transmit power constraint");

  const double Ps = cfg.Ps(), Pt = cfg.Pt(), s2 = cfg.noise_var();
  const Mat Fp = rs_enabled ? Mat(F.rightCols(Ks)) : F;

  // received amplitudes: rows are receivers, columns are streams
  const Mat gp = real.G.adjoint() * Fp;  // Ks x Ks
  const Mat zp = real.Z.adjoint() * Fp;  // Kt x Ks
  const Mat hv = real.H.adjoint() * V;   // Kt x Kt

  RateReport r;
  double rc = std::numeric_limits<double>::infinity();
  for (Eigen::Index u = 0; u < Ks; ++u) {
    const double priv = Ps * gp.row(u).squaredNorm();
    const double own = Ps * std::norm(gp(u, u));
    if (rs_enabled) {
      const double sig = Ps * std::norm(real.G.col(u).dot(F.col(0)));
      r.common_su.push_back(std::log2(1.0 + sig / (priv + s2)));
      rc = std::min(rc, r.common_su.back());
    }
    r.r_p_su.push_back(std::log2(1.0 + own / (priv - own + s2)));
  }
  for (Eigen::Index k = 0; k < Kt; ++k) {
    const double ici = Ps * zp.row(k).squaredNorm();
    const double bs = Pt * hv.row(k).squaredNorm();
    const double own = Pt * std::norm(hv(k, k));
    if (rs_enabled && real.interfered[k]) {
      const double sig = Ps * std::norm(real.Z.col(k).dot(F.col(0)));
      r.common_tu.push_back(std::log2(1.0 + sig / (ici + bs + s2)));
      rc = std::min(rc, r.common_tu.back());
    }
    r.r_p_tu.push_back(std::log2(1.0 + own / (bs - own + ici + s2)));
  }
  r.r_c = (rs_enabled && !std::isinf(rc)) ? rc : 0.0;
  r.sum = r.r_c;
  for (double x : r.r_p_su) r.sum += x;
  for (double x : r.r_p_tu) r.sum += x;
  return r;
}

std::vector<double> per_user_rates(const RateReport& r) {
  std::vector<double> out;
  const double share = r.r_p_su.empty() ? 0.0 : r.r_c / static_cast<double>(r.r_p_su.size());
  for (double x : r.r_p_su) out.push_back(x + share);
  for (double x : r.r_p_tu) out.push_back(x);
  return out;
}

}  // namespace stin

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/channel.hpp"

#include <charconv>
#include <cmath>

namespace stin {

namespace {

Vec ula(double phase_step, int n) {
  Vec a(n);
  const double centre = 0.5 * (n - 1);
  for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, phase_step * (m - centre));
  return a;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Linear MMSE filter for observation y = x + w, w ~ CN(0, s I).
Mat mmse_gain(const Mat& R, double s) {
  const Eigen::Index n = R.rows();
  Mat reg = R + s * Mat::Identity(n, n);
  // R and (R + sI) commute, so the gain is Hermitian.
  return hermitize(reg.ldlt().solve(R));
}

Vec estimate_one(const Vec& x, const Mat& R, double noise, double tau_p, Rng& rng) {
  if (std::isinf(tau_p)) return x;
  if (tau_p == 0.0) return Vec::Zero(x.size());
  const double s = noise / tau_p;
  Vec y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += complex_normal(rng, s);
  return mmse_gain(R, s) * y;
}

}  // namespace

Vec upa_response(double theta, double phi, double d1, double d2, int n1, int n2) {
  const Vec ah = ula(2.0 * M_PI * d1 * std::sin(theta) * std::cos(phi), n1);
  const Vec av = ula(2.0 * M_PI * d2 * std::cos(theta), n2);
  return kron(ah, av);
}

CovarianceSet spatial_covariances(const SystemConfig& cfg, const UserPlacement& placement,
                                  const LinkBudget& gains) {
  CovarianceSet c;
  c.M = cfg.M();
  c.N = cfg.N();
  c.Ks = static_cast<int>(placement.sus.size());
  c.Kt = static_cast<int>(placement.tus.size());
  c.kappa = cfg.kappa_s;
  c.alpha_su = gains.alpha_su;
  c.alpha_tu = gains.alpha_tu;
  c.beta = gains.beta;

  c.a_su = Mat::Zero(c.M, c.Ks);
  for (int u = 0; u < c.Ks; ++u) {
    const auto& aod = placement.sus[u].aod;
    c.a_su.col(u) = upa_response(aod.theta, aod.phi, cfg.d1_sat, cfg.d2_sat, cfg.M1, cfg.M2);
    c.Q_su.push_back(c.alpha_su[u] * c.a_su.col(u) * c.a_su.col(u).adjoint());
  }

  c.a_tu = Mat::Zero(c.M, c.Kt);
  for (int k = 0; k < c.Kt; ++k) {
    const auto& tu = placement.tus[k];
    c.interfered.push_back(tu.sat.has_value());
    if (tu.sat) {
      c.a_tu.col(k) =
          upa_response(tu.sat->aod.theta, tu.sat->aod.phi, cfg.d1_sat, cfg.d2_sat, cfg.M1, cfg.M2);
    }
    c.R_sat.push_back(c.alpha_tu[k] * c.a_tu.col(k) * c.a_tu.col(k).adjoint());

    Mat paths(c.N, static_cast<Eigen::Index>(tu.paths.size()));
    for (std::size_t l = 0; l < tu.paths.size(); ++l)
      paths.col(l) =
          upa_response(tu.paths[l].theta, tu.paths[l].phi, cfg.d1_bs, cfg.d2_bs, cfg.N1, cfg.N2);
    c.R_bs.push_back(c.beta[k] / static_cast<double>(paths.cols()) * paths * paths.adjoint());
    c.bs_paths.push_back(std::move(paths));
  }
  return c;
}

namespace {

cd rician_gain(double alpha, double kappa, Rng& rng) {
  if (std::isinf(kappa)) return {std::sqrt(alpha), 0.0};
  const double mean = std::sqrt(kappa * alpha / (1.0 + kappa));
  return mean + complex_normal(rng, alpha / (1.0 + kappa));
}

}  // namespace

ChannelRealization draw_channels(const CovarianceSet& covs, Rng& rng) {
  ChannelRealization r;
  r.G = Mat::Zero(covs.M, covs.Ks);
  r.Z = Mat::Zero(covs.M, covs.Kt);
  r.H = Mat::Zero(covs.N, covs.Kt);
  r.interfered = covs.interfered;
  for (int u = 0; u < covs.Ks; ++u)
    r.G.col(u) = rician_gain(covs.alpha_su[u], covs.kappa, rng) * covs.a_su.col(u);
  for (int k = 0; k < covs.Kt; ++k) {
    if (covs.interfered[k])
      r.Z.col(k) = rician_gain(covs.alpha_tu[k], covs.kappa, rng) * covs.a_tu.col(k);
    const Mat& paths = covs.bs_paths[k];
    Vec h = Vec::Zero(covs.N);
    for (Eigen::Index l = 0; l < paths.cols(); ++l)
      h += complex_normal(rng, covs.beta[k]) * paths.col(l);
    r.H.col(k) = h / std::sqrt(static_cast<double>(paths.cols()));
  }
  return r;
}

Mat mmse_error_covariance(const Mat& R, double noise_var, double tau_p) {
  if (std::isinf(tau_p)) return Mat::Zero(R.rows(), R.cols());
  if (tau_p == 0.0) return R;
  const Mat K = mmse_gain(R, noise_var / tau_p);
  return hermitize(R - K * R);
}

CsitEstimate mmse_estimate(const ChannelRealization& real, const CovarianceSet& covs,
                           const SystemConfig& cfg, Rng& rng) {
  const double noise = cfg.noise_var();
  const double tau = cfg.tau_p;
  CsitEstimate e;
  e.interfered = covs.interfered;
  e.G = Mat::Zero(real.G.rows(), real.G.cols());
  e.Z = Mat::Zero(real.Z.rows(), real.Z.cols());
  e.H = Mat::Zero(real.H.rows(), real.H.cols());
  for (int u = 0; u < covs.Ks; ++u) {
    e.G.col(u) = estimate_one(real.G.col(u), covs.Q_su[u], noise, tau, rng);
    e.psi_su.push_back(mmse_error_covariance(covs.Q_su[u], noise, tau));
  }
  for (int k = 0; k < covs.Kt; ++k) {
    if (covs.interfered[k]) {
      e.Z.col(k) = estimate_one(real.Z.col(k), covs.R_sat[k], noise, tau, rng);
      e.phi_sat.push_back(mmse_error_covariance(covs.R_sat[k], noise, tau));
    } else {
      e.phi_sat.push_back(Mat::Zero(covs.M, covs.M));
    }
    e.H.col(k) = estimate_one(real.H.col(k), covs.R_bs[k], noise, tau, rng);
    e.phi_bs.push_back(mmse_error_covariance(covs.R_bs[k], noise, tau));
  }
  return e;
}

std::string format_matrix(const Mat& m) {
  std::string out;
  char buf[64];
  auto put = [&](double v) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, p);
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      put(m(i, j).real());
      if (!std::signbit(m(i, j).imag())) out += '+';
      put(m(i, j).imag());
      out += 'j';
    }
    out += '\n';
  }
  return out;
}

}  // namespace stin

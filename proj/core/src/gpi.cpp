// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/gpi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stin {

namespace {

double floored(double x) { return std::max(x, kDenominatorFloor); }

// Per-iterate scalars shared by the objective and the pencil.
struct SatTerms {
  std::vector<double> x, y;          // common numerators / denominators
  std::vector<double> pnum, pden;    // private SU quotient parts
  std::vector<double> leak;          // per TU, only meaningful when active
  std::vector<bool> leak_active;
  double ff = 1.0;
};

SatTerms sat_terms(const SatelliteForms& s, const ReportValues& rep, const Vec& f) {
  SatTerms t;
  t.ff = f.squaredNorm();
  for (std::size_t i = 0; i < s.interfered.size(); ++i) {
    const double c = qf(s.C_c_bs[i], f) + rep.omega[s.interfered[i]] * t.ff;
    t.y.push_back(floored(c));
    t.x.push_back(floored(c + qf(s.S_c_bs[i], f)));
  }
  for (int u = 0; u < s.Ks; ++u) {
    const double uc = qf(s.U_c_sat[u], f);
    t.y.push_back(floored(uc));
    t.x.push_back(floored(uc + qf(s.S_c_sat[u], f)));
    const double up = qf(s.U_p_sat[u], f);
    t.pden.push_back(floored(up));
    t.pnum.push_back(floored(up + qf(s.S_p_sat[u], f)));
  }
  for (int j = 0; j < s.Kt; ++j) {
    const bool on = leakage_factor_active(s, rep, j);
    t.leak_active.push_back(on);
    t.leak.push_back(on ? floored(qf(s.C_p_bs[j], f) + rep.epsilon[j] * t.ff) : 1.0);
  }
  return t;
}

std::vector<double> common_values(const SatTerms& t) {
  std::vector<double> r;
  for (std::size_t i = 0; i < t.x.size(); ++i) r.push_back(std::log2(t.x[i] / t.y[i]));
  return r;
}

double objective_from_terms(const SatelliteForms& s, const ReportValues& rep, const SatTerms& t,
                            double mu) {
  double leak = 0.0;
  for (int j = 0; j < s.Kt; ++j)
    if (t.leak_active[j]) leak += std::log2(t.leak[j]);
  leak /= s.Ks;
  double obj = lse_soft_min(common_values(t), mu);
  for (int u = 0; u < s.Ks; ++u)
    obj += rep.epsilon_hat / s.Ks + std::log2(t.pnum[u] / t.pden[u]) - leak;
  return obj;
}

Pencil pencil_from_terms(const SatelliteForms& s, const ReportValues& rep, const SatTerms& t,
                         double mu) {
  const int D = s.dim();
  Pencil p{Mat::Zero(D, D), Mat::Zero(D, D)};
  const auto w = soft_min_weights(common_values(t), mu);
  const Mat I = Mat::Identity(D, D);

  std::size_t i = 0;
  for (; i < s.interfered.size(); ++i) {
    const Mat Y = s.C_c_bs[i] + rep.omega[s.interfered[i]] * I;
    p.A += (w[i] / t.x[i]) * (s.S_c_bs[i] + Y);
    p.B += (w[i] / t.y[i]) * Y;
  }
  for (int u = 0; u < s.Ks; ++u, ++i) {
    p.A += (w[i] / t.x[i]) * (s.S_c_sat[u] + s.U_c_sat[u]);
    p.B += (w[i] / t.y[i]) * s.U_c_sat[u];
    p.A += (s.S_p_sat[u] + s.U_p_sat[u]) / t.pnum[u];
    p.B += s.U_p_sat[u] / t.pden[u];
  }
  // Leakage gradient, summed over the Ks private terms (weight 1/Ks each).
  // The identity term on A makes the objective scale-invariant in f, so that
  // (A - B) f is the gradient along the sphere.
  int active = 0;
  for (int j = 0; j < s.Kt; ++j) {
    if (!t.leak_active[j]) continue;
    ++active;
    p.B += (s.C_p_bs[j] + rep.epsilon[j] * I) / t.leak[j];
  }
  p.A += (static_cast<double>(active) / t.ff) * I;
  p.A = hermitize(p.A);
  p.B = hermitize(p.B);
  return p;
}

// Step and residual for one pencil, sharing the solve.
struct Step {
  Vec y;
  double residual = 0.0;
};

Step step_from(const Vec& x, Vec y);
Step take_step(const Pencil& p, const Vec& x) { return step_from(x, pencil_step(p, x)); }

template <typename Eval>
StageResult iterate(Stage stage, const Vec& init, const GpiSettings& st, bool adapt_mu,
                    GpiTrace* trace, Eval&& eval) {
  StageResult res;
  Vec x = init / init.norm();
  double mu = st.mu;
  int since_change = 0;
  Vec best = x;
  double best_obj = -std::numeric_limits<double>::infinity();

  for (int it = 1; it <= st.t_max; ++it) {
    auto [obj, step] = eval(x, mu);
    if (obj > best_obj) {
      best_obj = obj;
      best = x;
    }
    const double ny = step.y.norm();
    if (ny == 0.0 || !std::isfinite(ny)) break;
    Vec next = align_phase(step.y / ny, x);
    const double disp = (next - x).norm();
    if (trace) {
      trace->records.push_back(
          {stage, (it - 1) / st.inner_max + 1, it, mu, disp, obj, step.residual});
    }
    x = std::move(next);
    res.iterations = it;
    if (disp < st.zeta) {
      res.converged = true;
      break;
    }
    if (adapt_mu && ++since_change >= st.schedule.trigger) {
      mu = mu_schedule(mu, st.schedule);
      since_change = 0;
    }
  }

  res.mu = mu;
  if (res.converged) {
    res.x = x;
    res.objective = eval(x, mu).first;
  } else {
    const double last = eval(x, mu).first;
    res.x = last >= best_obj ? x : best;
    res.objective = std::max(last, best_obj);
  }
  return res;
}

Step step_from(const Vec& x, Vec y) {
  Step s;
  s.y = std::move(y);
  const double ny = s.y.norm();
  if (ny == 0.0 || !std::isfinite(ny)) {
    s.residual = 1.0;
    return s;
  }
  const cd lam = x.dot(s.y) / x.squaredNorm();
  s.residual = (s.y - lam * x).norm() / ny;
  return s;
}

// Same objective and step as the full BS pencil, one N x N block per TU.
std::pair<double, Step> bs_block_eval(const BsForms& b, const Vec& v) {
  const int N = b.N, Kt = b.Kt;
  const double vv = v.squaredNorm();
  std::vector<double> sig(Kt), rest(Kt);
  double obj = 0.0;
  for (int k = 0; k < Kt; ++k) {
    double tot = b.noise * vv;
    for (int j = 0; j < Kt; ++j) {
      const auto vj = v.segment(j * N, N);
      tot += vj.dot(b.cov_blocks[k] * vj).real();
    }
    sig[k] = floored(std::norm(b.h.col(k).dot(v.segment(k * N, N))));
    rest[k] = floored(tot - sig[k]);
    obj += std::log2(sig[k] / rest[k]);
  }
  Mat common = Mat::Zero(N, N);
  for (int k = 0; k < Kt; ++k)
    common += (b.cov_blocks[k] + b.noise * Mat::Identity(N, N)) / rest[k];
  Vec y(v.size());
  for (int j = 0; j < Kt; ++j) {
    const Vec h = b.h.col(j);
    Mat D = common - (h * h.adjoint()) / rest[j];
    D = hermitize(D);
    const Vec rhs = h * (h.dot(v.segment(j * N, N)) / sig[j]);
    Eigen::LLT<Mat> llt(D);
    if (llt.info() == Eigen::Success) {
      y.segment(j * N, N) = llt.solve(rhs);
    } else {
      const double ridge = 1e-12 * std::max(D.trace().real() / N, 1e-300);
      y.segment(j * N, N) = (D + ridge * Mat::Identity(N, N)).ldlt().solve(rhs);
    }
  }
  return {obj, step_from(v, std::move(y))};
}

Vec unit_or_fallback(const Vec& g, const Mat& cov) {
  if (g.norm() > 0.0) return g / g.norm();
  if (cov.norm() > 0.0) return dominant_eigvec(cov);
  Vec e = Vec::Zero(g.size());
  e(0) = 1.0;
  return e;
}

}  // namespace

GpiSettings GpiSettings::from_config(const SystemConfig& cfg) {
  GpiSettings s;
  s.mu = cfg.mu0;
  s.zeta = cfg.zeta;
  s.inner_max = cfg.inner_max;
  s.t_max = cfg.t_max;
  s.schedule = {cfg.mu_factor, cfg.mu_trigger, cfg.mu_min, cfg.mu_max};
  return s;
}

double lse_soft_min(const std::vector<double>& x, double mu) {
  if (x.empty()) throw std::invalid_argument("lse_soft_min of an empty list");
  if (!(mu > 0)) throw std::invalid_argument("lse_soft_min needs mu > 0");
  const double m = *std::min_element(x.begin(), x.end());
  double acc = 0.0;
  for (double xi : x) acc += std::exp(-(xi - m) / mu);
  // acc is in [1, K], so the result is in [m, m + mu log K].
  const double r = m - mu * std::log(acc / static_cast<double>(x.size()));
  return std::clamp(r, m, m + mu * std::log(static_cast<double>(x.size())));
}

std::vector<double> soft_min_weights(const std::vector<double>& x, double mu) {
  const double m = *std::min_element(x.begin(), x.end());
  std::vector<double> w;
  double acc = 0.0;
  for (double xi : x) {
    w.push_back(std::exp(-(xi - m) / mu));
    acc += w.back();
  }
  for (double& wi : w) wi /= acc;
  return w;
}

double mu_schedule(double mu, const MuSchedule& s) {
  return std::clamp(mu * s.factor, s.floor, s.ceiling);
}

std::vector<double> common_stream_values(const SatelliteForms& forms, const ReportValues& rep,
                                         const Vec& f) {
  return common_values(sat_terms(forms, rep, f));
}

double sat_objective(const SatelliteForms& forms, const ReportValues& rep, const Vec& f,
                     double mu) {
  return objective_from_terms(forms, rep, sat_terms(forms, rep, f), mu);
}

double bs_objective(const BsForms& forms, const Vec& v) {
  double acc = 0.0;
  for (double g : gamma_private_tu(forms, v)) acc += g;
  return acc;
}

Pencil assemble_sat_matrices(const SatelliteForms& forms, const ReportValues& rep, const Vec& f,
                             double mu) {
  Pencil p = pencil_from_terms(forms, rep, sat_terms(forms, rep, f), mu);
  if (!p.A.allFinite() || !p.B.allFinite())
    throw std::runtime_error("satellite pencil has non-finite entries");
  return p;
}

Pencil assemble_bs_matrices(const BsForms& forms, const Vec& v) {
  const int D = forms.dim();
  Pencil p{Mat::Zero(D, D), Mat::Zero(D, D)};
  for (int k = 0; k < forms.Kt; ++k) {
    p.A += forms.S_p_bs[k] / floored(qf(forms.S_p_bs[k], v));
    p.B += forms.U_p_bs[k] / floored(qf(forms.U_p_bs[k], v));
  }
  p.A = hermitize(p.A);
  p.B = hermitize(p.B);
  if (!p.A.allFinite() || !p.B.allFinite())
    throw std::runtime_error("BS pencil has non-finite entries");
  return p;
}

Vec pencil_step(const Pencil& p, const Vec& x) {
  const Vec ax = p.A * x;
  Eigen::LLT<Mat> llt(p.B);
  if (llt.info() == Eigen::Success) return llt.solve(ax);
  // B lost definiteness numerically; a relative ridge is enough.
  const double ridge = 1e-12 * std::max(p.B.trace().real() / p.B.rows(), 1e-300);
  Mat b = p.B + ridge * Mat::Identity(p.B.rows(), p.B.cols());
  return b.ldlt().solve(ax);
}

double pencil_residual(const Pencil& p, const Vec& x) { return take_step(p, x).residual; }

KktResidual kkt_residual(const QuadraticFormSet& forms, const ReportValues& rep, const Vec& f,
                         const Vec& v, double mu) {
  return {pencil_residual(assemble_sat_matrices(forms.sat, rep, f, mu), f),
          pencil_residual(assemble_bs_matrices(forms.bs, v), v)};
}

StageResult run_sat_stage(const SatelliteForms& forms, const ReportValues& rep, const Vec& init,
                          const GpiSettings& settings, GpiTrace* trace) {
  return iterate(Stage::Satellite, init, settings, true, trace, [&](const Vec& f, double mu) {
    const SatTerms t = sat_terms(forms, rep, f);
    return std::make_pair(objective_from_terms(forms, rep, t, mu),
                          take_step(pencil_from_terms(forms, rep, t, mu), f));
  });
}

StageResult run_bs_stage(const BsForms& forms, const Vec& init, const GpiSettings& settings,
                         GpiTrace* trace) {
  return iterate(Stage::Bs, init, settings, false, trace, [&](const Vec& v, double) {
    if (forms.cov_blocks.size() == static_cast<std::size_t>(forms.Kt))
      return bs_block_eval(forms, v);
    return std::make_pair(bs_objective(forms, v), take_step(assemble_bs_matrices(forms, v), v));
  });
}

GpiResult run_stin_gpi(const QuadraticFormSet& forms, const ReportValues& rep,
                       const GpiSettings& settings, const StackedPrecoders& init) {
  GpiResult out;
  const StageResult sat = run_sat_stage(forms.sat, rep, init.f, settings, &out.trace);
  const StageResult bs = run_bs_stage(forms.bs, init.v, settings, &out.trace);
  out.p = init;
  out.p.f = sat.x;
  out.p.v = bs.x;
  out.p.f_scale = out.p.v_scale = 1.0;
  out.converged = sat.converged && bs.converged;
  out.sat_iterations = sat.iterations;
  out.bs_iterations = bs.iterations;
  out.final_mu = sat.mu;
  const auto res = kkt_residual(forms, rep, sat.x, bs.x, sat.mu);
  out.trace.res_sat = res.sat;
  out.trace.res_bs = res.bs;
  return out;
}

Vec mrt_satellite(const CsitEstimate& csit) {
  const auto M = csit.G.rows();
  const auto Ks = csit.G.cols();
  Vec f(M * (Ks + 1));
  Mat span = csit.G * csit.G.adjoint() + csit.Z * csit.Z.adjoint();
  Vec fc;
  if (span.norm() > 0.0) {
    fc = dominant_eigvec(span);
  } else {
    fc = Vec::Zero(M);
    fc(0) = 1.0;
  }
  f.head(M) = fc;
  for (Eigen::Index u = 0; u < Ks; ++u) {
    const Vec g = csit.G.col(u);
    f.segment((u + 1) * M, M) = unit_or_fallback(g, g * g.adjoint() + csit.psi_su[u]);
  }
  return f / f.norm();
}

Vec mrt_bs(const CsitEstimate& csit) {
  const auto N = csit.H.rows();
  const auto Kt = csit.H.cols();
  Vec v(N * Kt);
  for (Eigen::Index k = 0; k < Kt; ++k)
    v.segment(k * N, N) = unit_or_fallback(csit.H.col(k), csit.phi_bs[k]);
  return v / v.norm();
}

StackedPrecoders mrt_init(const CsitEstimate& csit) {
  StackedPrecoders p;
  p.M = static_cast<int>(csit.G.rows());
  p.N = static_cast<int>(csit.H.rows());
  p.f = mrt_satellite(csit);
  p.v = mrt_bs(csit);
  return p;
}

}  // namespace stin

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "stin/rates.hpp"

using namespace stin;

namespace {

void expect_rel(double got, double want, double tol) {
  EXPECT_LE(std::abs(got - want), tol * std::max(1.0, std::abs(want))) << got << " vs " << want;
}

double bits(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace

TEST(Stack, RoundTripAndBlockOrder) {
  Rng rng(1);
  Mat F(4, 3), V(4, 2);
  for (auto* m : {&F, &V})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = complex_normal(rng, 1.0);
  const auto p = stack(F, V);
  EXPECT_NEAR(p.f.norm(), 1.0, 1e-14);
  const auto [F2, V2] = unstack(p);
  EXPECT_LT((F2 - F / p.f_scale).norm(), 1e-15);
  EXPECT_LT((V2 - V / p.v_scale).norm(), 1e-15);
  EXPECT_LT((p.f.head(4) - F.col(0) / p.f_scale).norm(), 1e-15);
}

TEST(Stack, ZeroInputRejected) {
  EXPECT_THROW(stack(Mat::Zero(4, 3), Mat::Identity(4, 2)), std::invalid_argument);
}

TEST(Forms, StructuralProperties) {
  const auto in = oracle::make_instance(oracle::small_config(), 3);
  const auto& s = in.forms.sat;
  const int M = s.M;
  for (std::size_t i = 0; i < s.interfered.size(); ++i) {
    const int k = s.interfered[i];
    EXPECT_NEAR(s.S_c_bs[i].trace().real(), in.csit.Z.col(k).squaredNorm(), 1e-12);
    EXPECT_EQ(s.S_c_bs[i].bottomRightCorner(M * s.Ks, M * s.Ks).norm(), 0.0);
  }
  for (int u = 0; u < s.Ks; ++u) {
    Mat outside = s.S_p_sat[u];
    outside.block((u + 1) * M, (u + 1) * M, M, M).setZero();
    EXPECT_EQ(outside.norm(), 0.0);
    for (const Mat* m : {&s.S_c_sat[u], &s.U_c_sat[u], &s.S_p_sat[u], &s.U_p_sat[u]})
      EXPECT_LT((*m - m->adjoint()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(s.U_c_sat[u]);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Forms, LowerBoundMatchesScalarFormulas) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto in = oracle::make_instance(oracle::small_config(), seed);
    Rng rng(seed + 100);
    const auto [F, V] = oracle::random_precoders(in, rng);
    const auto p = stack(F, V);
    const auto r = lower_bound_rates(in.forms, p.f, p.v);
    const auto o = oracle::bound_sinr(in.csit, in.cfg, F, V);
    ASSERT_EQ(r.common_tu.size(), o.common_tu.size());
    for (std::size_t i = 0; i < o.common_tu.size(); ++i)
      expect_rel(r.common_tu[i], bits(o.common_tu[i]), 1e-10);
    for (std::size_t u = 0; u < o.common_su.size(); ++u) {
      expect_rel(r.common_su[u], bits(o.common_su[u]), 1e-10);
      expect_rel(r.r_p_su[u], bits(o.private_su[u]), 1e-10);
    }
    for (std::size_t k = 0; k < o.private_tu.size(); ++k)
      expect_rel(r.r_p_tu[k], bits(o.private_tu[k]), 1e-10);
  }
}

TEST(Forms, ZeroCommonBeamGivesZeroCommonRate) {
  auto in = oracle::make_instance(oracle::small_config(), 4);
  Rng rng(4);
  auto [F, V] = oracle::random_precoders(in, rng);
  F.col(0).setZero();
  const auto p = stack(F, V);
  const auto r = lower_bound_rates(in.forms, p.f, p.v);
  EXPECT_EQ(r.r_c, 0.0);
  for (double x : r.common_su) EXPECT_EQ(x, 0.0);
}

TEST(Forms, PerfectCsitSingleTuHandFormula) {
  SystemConfig c = oracle::small_config();
  c.Ks = 1;
  c.Kt = 1;
  c.Kt_int = 0;
  c.tau_p = std::numeric_limits<double>::infinity();
  const auto in = oracle::make_instance(c, 8);
  Rng rng(3);
  auto [F, V] = oracle::random_precoders(in, rng);
  const auto p = stack(F, V);
  const auto r = lower_bound_rates(in.forms, p.f, p.v);
  const double hv = std::norm(in.real.H.col(0).dot(p.v));
  expect_rel(r.r_p_tu[0], std::log2(1.0 + hv * c.Pt() / c.noise_var()), 1e-12);
}

TEST(Forms, NoiseIncreaseLowersEveryRate) {
  SystemConfig lo = oracle::small_config(), hi = lo;
  hi.snr_db = lo.snr_db - 3;
  const auto a = oracle::make_instance(lo, 2), b = oracle::make_instance(hi, 2);
  Rng rng(2);
  const auto [F, V] = oracle::random_precoders(a, rng);
  const auto p = stack(F, V);
  const auto ra = lower_bound_rates(a.forms, p.f, p.v);
  const auto rb = lower_bound_rates(b.forms, p.f, p.v);
  for (std::size_t u = 0; u < ra.r_p_su.size(); ++u) EXPECT_LT(rb.r_p_su[u], ra.r_p_su[u]);
  for (std::size_t k = 0; k < ra.r_p_tu.size(); ++k) EXPECT_LT(rb.r_p_tu[k], ra.r_p_tu[k]);
  EXPECT_LT(rb.r_c, ra.r_c);
}

TEST(Forms, NonUnitInputRejected) {
  const auto in = oracle::make_instance(oracle::small_config(), 1);
  const Vec f = Vec::Ones(in.forms.sat.dim());
  const Vec v = Vec::Ones(in.forms.bs.dim()).normalized();
  EXPECT_THROW(lower_bound_rates(in.forms, f, v), std::invalid_argument);
}

TEST(TrueRates, PrivateSuMatchesHandSinr) {
  SystemConfig c = oracle::small_config();
  const auto in = oracle::make_instance(c, 21);
  Rng rng(21);
  auto [F, V] = oracle::random_precoders(in, rng);
  const auto r = true_instantaneous_rates(in.real, F, V, c, true);
  for (int u = 0; u < c.Ks; ++u) {
    const Vec g = in.real.G.col(u);
    double interf = 0.0;
    for (int i = 1; i <= c.Ks; ++i)
      if (i != u + 1) interf += std::norm(g.dot(F.col(i)));
    const double sinr = std::norm(g.dot(F.col(u + 1))) / (interf + c.noise_var() / c.Ps());
    expect_rel(r.r_p_su[u], bits(sinr), 1e-12);
  }
}

TEST(TrueRates, NoCouplingGivesMuMimoRates) {
  SystemConfig c = oracle::small_config();
  c.Kt_int = 0;
  const auto in = oracle::make_instance(c, 5);
  Rng rng(5);
  auto [F, V] = oracle::random_precoders(in, rng);
  const auto r = true_instantaneous_rates(in.real, F, V, c, true);
  for (int k = 0; k < c.Kt; ++k) {
    const Vec h = in.real.H.col(k);
    double interf = 0.0;
    for (int j = 0; j < c.Kt; ++j)
      if (j != k) interf += std::norm(h.dot(V.col(j)));
    const double sinr = std::norm(h.dot(V.col(k))) / (interf + c.noise_var() / c.Pt());
    expect_rel(r.r_p_tu[k], bits(sinr), 1e-12);
  }
}

TEST(TrueRates, DominantCommonBeamGivesPositiveRate) {
  const auto in = oracle::make_instance(oracle::small_config(), 6);
  Mat span = in.real.G * in.real.G.adjoint() + in.real.Z * in.real.Z.adjoint();
  Mat F = Mat::Zero(in.cfg.M(), in.cfg.Ks + 1);
  F.col(0) = dominant_eigvec(span) * std::sqrt(0.5);
  for (int u = 0; u < in.cfg.Ks; ++u)
    F.col(u + 1) = in.real.G.col(u).normalized() * std::sqrt(0.5 / in.cfg.Ks);
  Mat V = in.real.H / in.real.H.norm();
  EXPECT_GT(true_instantaneous_rates(in.real, F, V, in.cfg, true).r_c, 0.0);
}

TEST(TrueRates, PowerViolationRejected) {
  const auto in = oracle::make_instance(oracle::small_config(), 6);
  const Mat F = Mat::Ones(in.cfg.M(), in.cfg.Ks + 1);
  const Mat V = Mat::Ones(in.cfg.N(), in.cfg.Kt) / 100.0;
  EXPECT_THROW(true_instantaneous_rates(in.real, F, V, in.cfg, true), std::invalid_argument);
}

TEST(TrueRates, PerUserAttributionSumsToTotal) {
  const auto in = oracle::make_instance(oracle::small_config(), 6);
  Rng rng(6);
  auto [F, V] = oracle::random_precoders(in, rng);
  const auto r = true_instantaneous_rates(in.real, F, V, in.cfg, true);
  double s = 0.0;
  for (double x : per_user_rates(r)) s += x;
  EXPECT_NEAR(s, r.sum, 1e-12);
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "stin/baselines.hpp"

using namespace stin;

namespace {

SystemConfig perfect(SystemConfig c) {
  c.tau_p = std::numeric_limits<double>::infinity();
  return c;
}

double bs_slnr(const CsitEstimate& e, const SystemConfig& c, const Vec& v, int k) {
  const int N = c.N();
  Mat leak = (c.noise_var() / c.Pt()) * c.Kt * Mat::Identity(N, N);
  for (int j = 0; j < c.Kt; ++j)
    if (j != k) leak += e.H.col(j) * e.H.col(j).adjoint() + e.phi_bs[j];
  return std::norm(e.H.col(k).dot(v)) / std::real(v.dot(leak * v));
}

}  // namespace

TEST(Zf, PerfectCsitNullsIui) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto in = oracle::make_instance(perfect(oracle::desk_config()), s);
    const auto b = zf_single_cell(in.csit, in.cfg);
    EXPECT_FALSE(b.regularized);
    EXPECT_NEAR(b.V.squaredNorm(), 1.0, 1e-12);
    EXPECT_NEAR(b.F.squaredNorm(), 1.0, 1e-12);
    EXPECT_EQ(b.F.cols(), in.cfg.Ks);
    for (int k = 0; k < in.cfg.Kt; ++k)
      for (int j = 0; j < in.cfg.Kt; ++j)
        if (j != k) EXPECT_LE(std::abs(in.csit.H.col(k).dot(b.V.col(j))), 1e-9);
    for (int u = 0; u < in.cfg.Ks; ++u)
      for (int i = 0; i < in.cfg.Ks; ++i)
        if (i != u) EXPECT_LE(std::abs(in.csit.G.col(u).dot(b.F.col(i))), 1e-9);
  }
}

TEST(Zf, ThreeUserRelativeIuiPower) {
  const auto in = oracle::make_instance(perfect(oracle::desk_config()), 3);
  ASSERT_EQ(in.cfg.N(), 9);
  const auto b = zf_single_cell(in.csit, in.cfg);
  for (int k = 0; k < 3; ++k) {
    double iui = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != k) iui += std::norm(in.csit.H.col(k).dot(b.V.col(j)));
    EXPECT_LE(iui / std::norm(in.csit.H.col(k).dot(b.V.col(k))), 1e-18);
  }
}

TEST(Zf, SingleUserIsMatchedFilter) {
  SystemConfig c = oracle::small_config();
  c.Kt = 1;
  c.Kt_int = 0;
  const auto in = oracle::make_instance(c, 4);
  const auto b = zf_single_cell(in.csit, c);
  EXPECT_GT(std::abs(real_cosine(align_phase(b.V.col(0), in.csit.H.col(0)), in.csit.H.col(0))),
            1 - 1e-12);
}

TEST(Zf, ClosedFormTuRate) {
  SystemConfig c = perfect(oracle::desk_config());
  c.Kt_int = 0;
  const auto in = oracle::make_instance(c, 8);
  const auto b = zf_single_cell(in.csit, c);
  const auto r = true_instantaneous_rates(in.real, b.F, b.V, c, false);
  const Mat gram_inv = (in.real.H.adjoint() * in.real.H).inverse();
  for (int k = 0; k < c.Kt; ++k) {
    const double want =
        std::log2(1.0 + c.Pt() / (c.noise_var() * c.Kt * gram_inv(k, k).real()));
    EXPECT_NEAR(r.r_p_tu[k], want, 1e-9);
  }
}

TEST(Zf, OverloadedFallsBackToRegularized) {
  SystemConfig c = oracle::small_config();
  c.Ks = 6;
  const auto in = oracle::make_instance(c, 1);
  const auto b = zf_single_cell(in.csit, c);
  EXPECT_TRUE(b.regularized);
  EXPECT_NEAR(b.F.squaredNorm(), 1.0, 1e-12);
  EXPECT_TRUE(b.F.allFinite());
}

TEST(ZfLocal, NullsInterferedTus) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    SystemConfig c = perfect(oracle::desk_config());
    c.Kt_int = 2;
    const auto in = oracle::make_instance(c, s);
    const auto b = zf_local(in.csit, c);
    EXPECT_FALSE(b.regularized);
    for (int k = 0; k < c.Kt; ++k) {
      if (!in.csit.interfered[k]) continue;
      for (int u = 0; u < c.Ks; ++u) EXPECT_LE(std::abs(in.csit.Z.col(k).dot(b.F.col(u))), 1e-9);
    }
  }
}

TEST(ZfLocal, NoInterferedTuEqualsSingleCell) {
  SystemConfig c = oracle::desk_config();
  c.Kt_int = 0;
  const auto in = oracle::make_instance(c, 2);
  const auto a = zf_local(in.csit, c), b = zf_single_cell(in.csit, c);
  EXPECT_LT((a.F - b.F).norm(), 1e-12);
  EXPECT_LT((a.V - b.V).norm(), 1e-12);
}

TEST(ZfLocal, FullDimensionEdgeCase) {
  SystemConfig c = perfect(oracle::small_config());
  c.Ks = 3;
  c.Kt_int = 1;
  ASSERT_EQ(c.Ks + c.Kt_int, c.M());
  const auto in = oracle::make_instance(c, 5);
  const auto b = zf_local(in.csit, c);
  EXPECT_FALSE(b.regularized);
  double worst = 0.0;
  for (int u = 0; u < c.Ks; ++u) {
    for (int i = 0; i < c.Ks; ++i)
      if (i != u) worst = std::max(worst, std::abs(in.csit.G.col(i).dot(b.F.col(u))));
    for (int k = 0; k < c.Kt; ++k)
      if (in.csit.interfered[k]) worst = std::max(worst, std::abs(in.csit.Z.col(k).dot(b.F.col(u))));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Slnr, NormalizedWithoutCommonColumn) {
  const auto in = oracle::make_instance(oracle::desk_config(), 3);
  const auto b = slnr_max(in.csit, in.cfg);
  EXPECT_EQ(b.F.cols(), in.cfg.Ks);
  EXPECT_NEAR(b.F.squaredNorm(), 1.0, 1e-12);
  EXPECT_NEAR(b.V.squaredNorm(), 1.0, 1e-12);
}

TEST(Slnr, SingleUserIsMatchedFilter) {
  SystemConfig c = perfect(oracle::small_config());
  c.Kt = 1;
  c.Kt_int = 0;
  const auto in = oracle::make_instance(c, 4);
  const auto b = slnr_max(in.csit, c);
  const Vec h = in.csit.H.col(0);
  EXPECT_GT(real_cosine(align_phase(b.V.col(0), h), h), 1 - 1e-12);
}

TEST(Slnr, BeatsMrtAndRandomDirections) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto in = oracle::make_instance(oracle::desk_config(), 40 + s);
    const auto b = slnr_max(in.csit, in.cfg);
    Rng rng(s);
    for (int k = 0; k < in.cfg.Kt; ++k) {
      const double got = bs_slnr(in.csit, in.cfg, b.V.col(k), k);
      EXPECT_GE(got * (1 + 1e-10), bs_slnr(in.csit, in.cfg, in.csit.H.col(k), k));
      for (int t = 0; t < 100; ++t)
        EXPECT_GE(got * (1 + 1e-10), bs_slnr(in.csit, in.cfg, oracle::random_unit(in.cfg.N(), rng), k));
    }
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "stin/channel.hpp"

using namespace stin;

namespace {

double rel_fro(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

double min_eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(Upa, BroadsideHorizontalPhases) {
  const Vec a = upa_response(M_PI / 2, 0.0, 0.5, 0.5, 3, 1);
  ASSERT_EQ(a.size(), 3);
  EXPECT_NEAR(std::abs(a(0) - cd(-1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a(1) - cd(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a(2) - cd(-1, 0)), 0.0, 1e-12);
}

TEST(Upa, ZeroThetaHasFlatHorizontalFactor) {
  const Vec a = upa_response(0.0, 1.3, 1.0, 1.0, 4, 1);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(a(i) - cd(1, 0)), 0.0, 1e-12);
}

TEST(Upa, UnitModulusEntries) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Vec a = upa_response(M_PI * uniform01(rng), 2 * M_PI * uniform01(rng), 0.5, 1.0, 3, 4);
    EXPECT_NEAR(a.squaredNorm(), 12.0, 1e-10);
    for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a(i)), 1.0, 1e-12);
  }
}

TEST(Covariance, SatelliteRankOneWithTraceMAlpha) {
  const auto in = oracle::make_instance(oracle::desk_config(), 5);
  for (int u = 0; u < in.covs.Ks; ++u) {
    const Mat& Q = in.covs.Q_su[u];
    EXPECT_NEAR(Q.trace().real(), in.covs.M * in.covs.alpha_su[u], 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat> es(Q);
    EXPECT_LT(es.eigenvalues()(Q.rows() - 2), 1e-9);
  }
  for (int k = 0; k < in.covs.Kt; ++k) {
    EXPECT_GE(min_eig(in.covs.R_bs[k]), -1e-10);
    EXPECT_LT((in.covs.R_bs[k] - in.covs.R_bs[k].adjoint()).norm(), 1e-12);
  }
}

TEST(Covariance, SinglePathIsRankOne) {
  SystemConfig c = oracle::small_config();
  c.Lt = 1;
  const auto in = oracle::make_instance(c, 1);
  Eigen::SelfAdjointEigenSolver<Mat> es(in.covs.R_bs[0]);
  EXPECT_LT(es.eigenvalues()(c.N() - 2), 1e-10);
}

TEST(Channels, SampleCovarianceMatchesBsCovariance) {
  SystemConfig c = oracle::small_config();
  const auto in = oracle::make_instance(c, 3);
  Rng rng(17);
  Mat acc = Mat::Zero(c.N(), c.N());
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto r = draw_channels(in.covs, rng);
    acc += r.H.col(0) * r.H.col(0).adjoint();
  }
  EXPECT_LT(rel_fro(acc / n, in.covs.R_bs[0]), 0.03);
}

TEST(Channels, InfiniteKappaIsDeterministic) {
  SystemConfig c = oracle::small_config();
  c.kappa_s = std::numeric_limits<double>::infinity();
  const auto in = oracle::make_instance(c, 3);
  Rng a(1), b(2);
  const auto r1 = draw_channels(in.covs, a), r2 = draw_channels(in.covs, b);
  EXPECT_EQ((r1.G - r2.G).norm(), 0.0);
  EXPECT_NEAR(std::abs(r1.G(0, 0)), std::sqrt(in.covs.alpha_su[0]), 1e-12);
}

TEST(Channels, ZeroKappaIsRayleigh) {
  SystemConfig c = oracle::small_config();
  c.kappa_s = 0.0;
  const auto in = oracle::make_instance(c, 3);
  Rng rng(8);
  const int n = 100000;
  cd mean = 0;
  double power = 0;
  const Vec a = in.covs.a_su.col(0);
  for (int i = 0; i < n; ++i) {
    const auto r = draw_channels(in.covs, rng);
    const cd g = a.dot(r.G.col(0)) / a.squaredNorm();
    mean += g;
    power += std::norm(g);
  }
  EXPECT_LT(std::abs(mean / double(n)), 0.01);
  EXPECT_NEAR(power / n / in.covs.alpha_su[0], 1.0, 0.02);
}

TEST(Channels, NonInterferedColumnsAreZero) {
  SystemConfig c = oracle::desk_config();
  c.Kt_int = 1;
  const auto in = oracle::make_instance(c, 9);
  for (int k = 0; k < c.Kt; ++k) {
    if (in.real.interfered[k]) continue;
    EXPECT_EQ(in.real.Z.col(k).norm(), 0.0);
    EXPECT_EQ(in.csit.Z.col(k).norm(), 0.0);
  }
}

TEST(Channels, SatelliteColumnsAreAlongSteeringVector) {
  const auto in = oracle::make_instance(oracle::desk_config(), 4);
  for (int u = 0; u < in.covs.Ks; ++u) {
    const Vec a = in.covs.a_su.col(u);
    const Vec g = in.real.G.col(u);
    const cd s = a.dot(g) / a.squaredNorm();
    EXPECT_LT((g - s * a).norm(), 1e-12 * (1 + g.norm()));
  }
}

TEST(Mmse, PerfectPilotIsExact) {
  SystemConfig c = oracle::desk_config();
  c.tau_p = std::numeric_limits<double>::infinity();
  const auto in = oracle::make_instance(c, 2);
  EXPECT_EQ((in.csit.H - in.real.H).norm(), 0.0);
  EXPECT_EQ((in.csit.G - in.real.G).norm(), 0.0);
  for (const auto& p : in.csit.phi_bs) EXPECT_EQ(p.norm(), 0.0);
}

TEST(Mmse, ErrorCovarianceMatchesClosedForm) {
  for (double tau : {0.5, 2.0}) {
    const Mat R = oracle::make_instance(oracle::small_config(), 6).covs.R_bs[1];
    EXPECT_LT(rel_fro(mmse_error_covariance(R, 1.0, tau), oracle::lmmse_error(R, 1.0, tau)),
              1e-10);
  }
}

TEST(Mmse, ErrorBelowPriorInLoewnerOrder) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto in = oracle::make_instance(oracle::small_config(), s);
    for (int k = 0; k < in.covs.Kt; ++k)
      EXPECT_GE(min_eig(in.covs.R_bs[k] - in.csit.phi_bs[k]), -1e-10);
    for (int u = 0; u < in.covs.Ks; ++u)
      EXPECT_GE(min_eig(in.covs.Q_su[u] - in.csit.psi_su[u]), -1e-10);
  }
}

TEST(Mmse, EmpiricalErrorAtTauTwo) {
  SystemConfig c = oracle::small_config();
  const auto in = oracle::make_instance(c, 12);
  Rng rng(99);
  Mat acc = Mat::Zero(c.N(), c.N());
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto real = draw_channels(in.covs, rng);
    const auto est = mmse_estimate(real, in.covs, c, rng);
    const Vec e = real.H.col(0) - est.H.col(0);
    acc += e * e.adjoint();
  }
  EXPECT_LT(rel_fro(acc / n, oracle::lmmse_error(in.covs.R_bs[0], 1.0, 2.0)), 0.05);
}

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gbb/errors.hpp"
#include "gbb/feldman_hajek.hpp"
#include "gbb/kernels.hpp"
#include "test_support.hpp"

namespace gbb {
namespace {

using Tag = GridFunction::Tag;

// Nodes {0, 0.25, 0.5, 0.75}.
GridPtr quarter_grid() { return test::coarse_grid(GridKind::Uniform, 3, 0.25); }

TEST(CovMatrix, BrownianBridgeExample) {
  const auto r = cov_matrix(CovKernel::brownian_bridge(), quarter_grid());
  EXPECT_NEAR(r.m(1, 1), 0.1875, 1e-15);
  EXPECT_NEAR(r.m(2, 2), 0.25, 1e-15);
  EXPECT_NEAR(r.m(3, 3), 0.1875, 1e-15);
  EXPECT_NEAR(r.m(1, 3), 0.0625, 1e-15);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(r.m(0, j), 0.0);
    EXPECT_EQ(r.m(j, 0), 0.0);
  }
}

TEST(CovMatrix, UnitBridgeMatchesClassical) {
  const auto g = make_grid(GridKind::Geometric, 40, 1e-3);
  const auto a = cov_matrix(CovKernel::brownian_bridge(), g);
  const auto b = cov_matrix(CovKernel::bridge(1.0), g);
  EXPECT_LE((a.m - b.m).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CovMatrix, CsvHasHeaderAndRows) {
  const auto r = cov_matrix(CovKernel::bridge(0.8), quarter_grid());
  std::stringstream out;
  write_matrix_csv(r, out);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(out, line)) ++lines;
  EXPECT_EQ(lines, 5u);
}

TEST(Whiten, IdenticalKernelsGiveZeroSpectrum) {
  const auto g = make_grid(GridKind::Geometric, 128, 1e-3);
  const auto r = cov_matrix(CovKernel::brownian_bridge(), g);
  const auto rc = cov_matrix(CovKernel::bridge(1.0), g);
  for (double l : whiten_spectrum(r, rc)) EXPECT_NEAR(l, 0.0, 1e-10);
  EXPECT_LE(hs_norm_sq(r, rc), 1e-20);
  EXPECT_NEAR(sym_kl(r, r), 0.0, 1e-10);
}

TEST(Whiten, ScaledKernelGivesUnitSpectrum) {
  const auto g = make_grid(GridKind::Uniform, 32, 1e-2);
  const auto r = cov_matrix(CovKernel::brownian_bridge(), g);
  CovMatrix twice = r;
  twice.m *= 2.0;
  const auto lam = whiten_spectrum(r, twice);
  EXPECT_EQ(lam.size(), 32u);
  for (double l : lam) EXPECT_NEAR(l, 1.0, 1e-10);
}

TEST(SymKl, ScaledThreeNodeExample) {
  const auto r = cov_matrix(CovKernel::brownian_bridge(), quarter_grid());
  CovMatrix twice = r;
  twice.m *= 2.0;
  EXPECT_NEAR(sym_kl(r, twice), 0.75, 1e-12);
}

TEST(Whiten, PinnedRegressionAtSixtyFourNodes) {
  // Independent reference: eigenvalues of R^{-1/2} Rc R^{-1/2} - I via a
  // symmetric square root in double precision.
  const auto g = make_grid(GridKind::Uniform, 64, 1e-2);
  const auto r = cov_matrix(CovKernel::brownian_bridge(), g);
  const auto rc = cov_matrix(CovKernel::bridge(0.8), g);
  const auto lam = whiten_spectrum(r, rc);
  double sum = 0.0;
  for (double l : lam) sum += l * l;
  EXPECT_NEAR(sum, 0.5723014439727732, 1e-9);
  EXPECT_NEAR(hs_norm_sq(r, rc), sum, 1e-10);
  EXPECT_NEAR(lam.back(), 0.728162757841134, 1e-9);
}

TEST(Whiten, GridMismatchRejected) {
  const auto a = cov_matrix(CovKernel::brownian_bridge(), make_grid(GridKind::Uniform, 8, 1e-2));
  const auto b = cov_matrix(CovKernel::brownian_bridge(), make_grid(GridKind::Uniform, 9, 1e-2));
  EXPECT_THROW(hs_norm_sq(a, b), ContractViolation);
}

TEST(Trends, SingularCaseGrows) {
  const auto hs = hs_trend(0.8, {64, 128, 256});
  EXPECT_EQ(hs.verdict, Verdict::Divergent);
  const auto kl = kl_trend(0.8, {64, 128, 256});
  for (std::size_t i = 1; i < kl.ordinates.size(); ++i) EXPECT_GT(kl.ordinates[i], kl.ordinates[i - 1]);
  EXPECT_EQ(hs_trend(1.0, {64, 128}).verdict, Verdict::Bounded);
  EXPECT_THROW(hs_trend(0.8, {128, 64}), ConfigError);
  EXPECT_THROW(hs_trend(0.8, {64, 4096}), ConfigError);
}

TEST(TrendGrid, ClampMovesWithN) {
  EXPECT_NEAR(fh_trend_grid(64)->eps_min(), 1e-2, 1e-18);
  EXPECT_NEAR(fh_trend_grid(128)->eps_min(), 2.5e-3, 1e-18);
  EXPECT_EQ(fh_trend_grid(128)->intervals(), 128u);
}

TEST(QcTrend, UnitCaseIsTheSquareArea) {
  const auto r = qc_l2_trend(1.0);
  ASSERT_EQ(r.abscissae.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.ordinates[i], std::pow(1.0 - r.abscissae[i], 2), 1e-9);
}

TEST(QcTrend, MatchesIndependentDoubleIntegral) {
  // 20-digit reference values of V(1e-3).
  EXPECT_NEAR(qc_l2_trend(1.5, {1e-3, 1e-4}).ordinates[0], 1.639365023313662788, 1e-8);
  EXPECT_NEAR(qc_l2_trend(0.75, {1e-3, 1e-4}).ordinates[0], 1.7442667038451083999, 1e-8);
}

TEST(QcTrend, DomainAndRange) {
  EXPECT_THROW(qc_l2_trend(0.5), DomainError);
  EXPECT_THROW(qc_l2_trend(0.4), DomainError);
  EXPECT_THROW(qc_l2_trend(0.8, {1e-3, 1e-7}), ConfigError);
}

TEST(OperatorA, Examples) {
  const auto g = make_grid(GridKind::Geometric, 200, 1e-3);
  const auto one = GridFunction::sample(g, [](double) { return 1.0; }, Tag::Function);
  const auto id = GridFunction::sample(g, [](double s) { return s; }, Tag::Function);
  const auto a1 = apply_A(one);
  const auto as = apply_A(id);
  const auto st = apply_A_star(one);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double t = (*g)[i];
    ASSERT_NEAR(a1(i), 0.0, 1e-14);
    ASSERT_NEAR(as(i), 0.5 * t * t - 0.5 * t, 1e-14);
    ASSERT_NEAR(st(i), 0.5 - t, 1e-14);
  }
}

TEST(OperatorA, MatricesHaveExtendedShape) {
  const auto g = make_grid(GridKind::Uniform, 10, 1e-2);
  const auto nodes = extended_nodes(*g);
  ASSERT_EQ(nodes.size(), 12u);
  EXPECT_EQ(nodes.back(), 1.0);
  const auto a = a_matrix(*g);
  EXPECT_EQ(a.rows(), 12);
  EXPECT_EQ(a.cols(), 11);
  // A maps constant cell values to zero.
  Eigen::VectorXd w(11);
  for (int l = 0; l < 11; ++l) w(l) = 1.0;
  EXPECT_LE((a * w).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(a_star_matrix(*g).rows(), 12);
}

TEST(Factorization, DeviationIsFirstOrder) {
  const double d1 = r_factorization_deviation(*make_grid(GridKind::Geometric, 128, 1e-3));
  const double d2 = r_factorization_deviation(*make_grid(GridKind::Geometric, 256, 1e-3));
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d2 / d1, 0.5, 0.06);
}

TEST(QConsistency, UnitCaseIsExactAndOthersConverge) {
  EXPECT_LE(discrete_q_consistency(1.0, *make_grid(GridKind::Uniform, 128, 1e-2)).max_rel_deviation, 1e-6);
  const auto a = discrete_q_consistency(2.0, *make_grid(GridKind::Geometric, 128, 1e-3));
  const auto b = discrete_q_consistency(2.0, *make_grid(GridKind::Geometric, 256, 1e-3));
  EXPECT_NEAR(b.max_rel_deviation / a.max_rel_deviation, 0.5, 0.06);
  EXPECT_THROW(discrete_q_consistency(0.5, *make_grid(GridKind::Uniform, 16, 1e-2)), DomainError);
}

}  // namespace
}  // namespace gbb

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gbb/cameron_martin.hpp"
#include "gbb/errors.hpp"

namespace gbb {
namespace {

using Tag = GridFunction::Tag;

GridPtr fine_grid() { return make_grid(GridKind::Geometric, 4096, std::ldexp(1.0, -14)); }

TEST(ApplyT, ZeroMapsToZero) {
  const auto g = make_grid(GridKind::Geometric, 64, 1e-3);
  const GridFunction zero(g, 1, Tag::Derivative);
  const auto k = apply_T(DriftFamily::power(2.0), zero);
  for (double v : k.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(k.tag(), Tag::Function);
}

TEST(ApplyT, ClassicalBridgeOfConstant) {
  // c = 1, hdot = 1: k(t) = (1-t) int_0^t ds/(1-s) = -(1-t) ln(1-t).
  const auto g = make_grid(GridKind::Geometric, 2048, 1e-4);
  const auto hdot = GridFunction::sample(g, [](double) { return 1.0; }, Tag::Derivative);
  const auto k = apply_T(DriftFamily::bridge(1.0), hdot);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double t = (*g)[i];
    ASSERT_NEAR(k(i), -(1.0 - t) * std::log1p(-t), 1e-5) << t;
  }
}

TEST(ApplyT, RequiresDerivativeTag) {
  const auto g = make_grid(GridKind::Uniform, 16, 1e-2);
  const GridFunction f(g, 1, Tag::Function);
  EXPECT_THROW(apply_T(DriftFamily::bridge(1.0), f), ContractViolation);
  EXPECT_THROW(apply_T_inv(DriftFamily::bridge(1.0), GridFunction(g, 1, Tag::Derivative)), ContractViolation);
}

TEST(ApplyTInv, QuadraticIsExact) {
  // c = 1, k = t(1-t): k' + k/(1-t) = 1 - t. Three-point differences are exact on quadratics.
  const auto g = make_grid(GridKind::Geometric, 200, 1e-3);
  const auto k = GridFunction::sample(g, [](double t) { return t * (1.0 - t); }, Tag::Function);
  const auto hdot = apply_T_inv(DriftFamily::bridge(1.0), k);
  EXPECT_EQ(hdot.tag(), Tag::Derivative);
  for (std::size_t i = 0; i < g->size(); ++i) ASSERT_NEAR(hdot(i), 1.0 - (*g)[i], 1e-9);
}

TEST(ApplyTInv, ZeroMapsToZero) {
  const auto g = make_grid(GridKind::Uniform, 16, 1e-2);
  const auto h = apply_T_inv(DriftFamily::bridge(0.75), GridFunction(g, 1, Tag::Function));
  for (double v : h.values()) EXPECT_EQ(v, 0.0);
}

TEST(ApplyT, RoundTripOnSmoothInput) {
  const auto g = make_grid(GridKind::Geometric, 4096, 1e-2);
  const auto hdot = GridFunction::sample(g, [](double t) { return std::cos(3.0 * t) + t * t; }, Tag::Derivative);
  for (double c : {0.75, 2.0}) {
    const auto fam = DriftFamily::bridge(c);
    const auto back = apply_T_inv(fam, apply_T(fam, hdot));
    std::vector<double> diff(g->size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = back(i) - hdot(i);
    const GridFunction d(g, diff, 1, Tag::Derivative);
    EXPECT_LE(d.l2_norm() / hdot.l2_norm(), 1e-3) << c;
  }
}

TEST(Lemma1, ConstantInputClosedForm) {
  // c = 2, f = 1: g(x) = (1 - (1-x)^{c-1}) / (c-1) = x.
  const auto g = make_grid(GridKind::Geometric, 256, 1e-3);
  const auto f = GridFunction::sample(g, [](double) { return 1.0; }, Tag::Function);
  const auto r = lemma1_g(2.0, f);
  for (std::size_t i = 0; i < g->size(); ++i) ASSERT_NEAR(r.g(i), (*g)[i], 1e-13);
  EXPECT_DOUBLE_EQ(r.bound, 2.0 / 3.0);
  EXPECT_LE(r.ratio, r.bound);
}

TEST(Lemma1, SpikeAndErrors) {
  const auto g = make_grid(GridKind::Uniform, 64, 1e-2);
  GridFunction spike(g, 1, Tag::Function);
  spike(10) = 1.0;
  const auto r = lemma1_g(0.75, spike);
  EXPECT_LE(r.ratio, r.bound);
  EXPECT_THROW(lemma1_g(0.5, spike), DomainError);
  EXPECT_THROW(lemma1_g(0.75, GridFunction(g, 1, Tag::Function)), ConfigError);
}

TEST(Lemma1, BoundHoldsForOscillatingInputs) {
  const auto g = make_grid(GridKind::Geometric, 1024, 1e-4);
  for (double c : {0.55, 0.75, 1.0, 3.0}) {
    for (int m = 1; m <= 8; ++m) {
      const auto f = GridFunction::sample(g, [m](double t) { return std::sin(m * 3.1 * t) + 0.3; }, Tag::Function);
      const auto r = lemma1_g(c, f);
      EXPECT_LE(r.ratio, r.bound) << c << ' ' << m;
    }
  }
}

TEST(TailQuotient, ParabolaIsBounded) {
  // h = t(1-t), h(1) = 0: the quotient is -u, so I(eps) = (1-eps)^3 / 3.
  const auto g = make_grid(GridKind::Geometric, 4096, 1e-6);
  const auto h = GridFunction::sample(g, [](double t) { return t * (1.0 - t); }, Tag::Function);
  const auto r = tail_quotient_check(h);
  ASSERT_EQ(r.abscissae.size(), 12u);
  for (std::size_t i = 0; i < r.abscissae.size(); ++i) {
    const double e = r.abscissae[i];
    EXPECT_NEAR(r.ordinates[i], std::pow(1.0 - e, 3) / 3.0, 1e-3 * r.ordinates[i]);
  }
  EXPECT_EQ(r.verdict, Verdict::Bounded);
}

TEST(TailQuotient, SquareRootIsDivergent) {
  // h = 1 - sqrt(1-t): quotient (1-u)^{-1/2}, I(eps) = ln(1/eps).
  const auto g = make_grid(GridKind::Geometric, 4096, 1e-8);
  const auto h = GridFunction::sample(g, [](double t) { return 1.0 - std::sqrt(1.0 - t); }, Tag::Function);
  const auto r = tail_quotient_check(h, dyadic_eps_list(3, 14));
  for (std::size_t i = 0; i < r.abscissae.size(); ++i)
    EXPECT_NEAR(r.ordinates[i], std::log(1.0 / r.abscissae[i]), 2e-2 * r.ordinates[i]);
  EXPECT_EQ(r.verdict, Verdict::Divergent);
}

TEST(TailQuotient, EpsBeyondGridRejected) {
  const auto g = make_grid(GridKind::Geometric, 64, 1e-2);
  const auto h = GridFunction::sample(g, [](double t) { return t; }, Tag::Function);
  EXPECT_THROW(tail_quotient_check(h, {1e-1, 1e-3}), ConfigError);
}

TEST(DyadicEps, Values) {
  const auto e = dyadic_eps_list();
  ASSERT_EQ(e.size(), 12u);
  EXPECT_EQ(e.front(), 0.125);
  EXPECT_EQ(e.back(), std::ldexp(1.0, -14));
}

TEST(Membership, PowerWitnessRatio) {
  // alpha = 2, k = t (1-t)^0.6: integrand ~ (1-t)^{-2.8}, so I(eps/2)/I(eps) -> 2^1.8.
  const auto g = fine_grid();
  const auto k = GridFunction::sample(g, [](double t) { return t * std::pow(1.0 - t, 0.6); }, Tag::Function);
  const auto r = membership_diagnostic(DriftFamily::power(2.0), k, dyadic_eps_list(3, 12));
  EXPECT_NEAR(r.last_ratio, std::pow(2.0, 1.8), 0.1 * std::pow(2.0, 1.8));
  EXPECT_EQ(r.verdict, Verdict::Divergent);
}

TEST(Membership, BridgeImageIsBounded) {
  const auto g = fine_grid();
  const auto fam = DriftFamily::bridge(0.75);
  const auto hdot = GridFunction::sample(g, [](double t) { return std::cos(2.0 * t); }, Tag::Derivative);
  const auto r = membership_diagnostic(fam, apply_T(fam, hdot), dyadic_eps_list(3, 13));
  EXPECT_EQ(r.verdict, Verdict::Bounded);
}

TEST(Membership, RequiresZeroStart) {
  const auto g = make_grid(GridKind::Uniform, 16, 1e-2);
  const auto k = GridFunction::sample(g, [](double t) { return 1.0 + t; }, Tag::Function);
  EXPECT_THROW(membership_diagnostic(DriftFamily::bridge(1.0), k, {0.5, 0.25}), ContractViolation);
}

TEST(Subhalf, LogarithmicDivergenceAtHalf) {
  // c = 1/2, hdot = 1: J(eps) = 4 (ln(1/eps) - 3 + 4 sqrt(eps) - eps).
  const auto g = fine_grid();
  const auto hdot = GridFunction::sample(g, [](double) { return 1.0; }, Tag::Derivative);
  const auto r = subhalf_diagnostic(0.5, hdot, dyadic_eps_list(3, 14));
  for (std::size_t i = 0; i < r.abscissae.size(); ++i) {
    const double e = r.abscissae[i];
    const double want = 4.0 * (std::log(1.0 / e) - 3.0 + 4.0 * std::sqrt(e) - e);
    EXPECT_NEAR(r.ordinates[i], want, 1e-3 * want) << e;
  }
  EXPECT_EQ(r.verdict, Verdict::Divergent);
  EXPECT_THROW(subhalf_diagnostic(0.6, hdot, dyadic_eps_list(3, 14)), DomainError);
}

TEST(Battery, FiftyFunctionsVanishingAtEnds) {
  const auto b = h00_battery();
  ASSERT_EQ(b.size(), 50u);
  for (const auto& f : b) {
    EXPECT_NEAR(f.fn(0.0), 0.0, 1e-15) << f.name;
    EXPECT_NEAR(f.fn(1.0), 0.0, 1e-12) << f.name;
  }
}

}  // namespace
}  // namespace gbb

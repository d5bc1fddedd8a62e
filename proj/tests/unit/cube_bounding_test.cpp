#include <gtest/gtest.h>

#include <cmath>

#include "psdrank/cube.hpp"
#include "psdrank/error.hpp"
#include "support.hpp"

namespace psdrank {
namespace {

using testing::Rng;

Polynomial P(const char* text) { return parse_polynomial(text); }
const VarId x1 = x_var(1);
const VarId y0{VarKind::homogenization, 0};
const VarId y1{VarKind::homogenization, 1};
const VarId z1{VarKind::slack, 1};

TEST(Homogenize, Examples) {
  const VarId y{VarKind::homogenization, 9};
  EXPECT_EQ(homogenize(P("x1*x1 - 1"), y), P("x1*x1 - y9*y9"));
  EXPECT_EQ(homogenize(P("x1"), y), P("x1"));
  EXPECT_EQ(homogenize(P("x1*x1 + x2 - 1"), y), P("x1*x1 + x2*y9 - y9*y9"));
  EXPECT_THROW(homogenize(Polynomial(), y), Error);
}

// phi written out directly from its summands and evaluated without
// expanding, as an oracle for the expanded polynomial.
Rational phi_direct(const ExactPoint& a) {
  auto sq = [](const Rational& v) { return v * v; };
  const Rational X = a.at(x1), Y0 = a.at(y0), Y1 = a.at(y1), Z = a.at(z1);
  return sq(Y1 - Y0 * Y0) + sq(2 * Y0 - 1) + sq(X * X + Z * Z - 1) + sq(X * X - Y1 * Y1);
}

TEST(BuildPhi, SquareMinusOneWithHeightOne) {
  const BoundedInstance b = build_phi(P("x1*x1 - 1"), 1);
  ASSERT_EQ(b.summands.size(), 4u);
  EXPECT_EQ(b.summands[0], P("y1 - y0*y0"));
  EXPECT_EQ(b.summands[1], P("2*y0 - 1"));
  EXPECT_EQ(b.summands[2], P("x1*x1 + z1*z1 - 1"));
  EXPECT_EQ(b.summands[3], P("x1*x1 - y1*y1"));
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const ExactPoint a{{x1, testing::random_rational(rng)},
                       {y0, testing::random_rational(rng)},
                       {y1, testing::random_rational(rng)},
                       {z1, testing::random_rational(rng)}};
    ASSERT_EQ(evaluate(b.phi, a), phi_direct(a));
  }
}

TEST(BuildPhi, MentionsEveryTowerAndSlackVariable) {
  const BoundedInstance b = build_phi(P("x1*x2 - x3"), 3);
  const auto vars = b.phi.variables();
  for (const VarId& v : b.y_vars) EXPECT_TRUE(vars.count(v)) << v.name();
  for (const VarId& v : b.z_vars) EXPECT_TRUE(vars.count(v)) << v.name();
  EXPECT_EQ(b.degree, 2u);
}

TEST(BuildPhi, Preconditions) {
  EXPECT_THROW(build_phi(Polynomial(), 1), Error);
  EXPECT_THROW(build_phi(P("x1"), 0), Error);
  EXPECT_THROW(build_phi(P("x1 + y0"), 1), Error);
}

TEST(BuildPhi, SumOfSquaresIsNonnegative) {
  Rng rng(32);
  const BoundedInstance b = build_phi(P("x1*x1 - x2 + 1"), 2);
  const auto vars = b.phi.variables();
  for (int trial = 0; trial < 1000; ++trial) {
    ExactPoint a;
    for (const VarId& v : vars) a[v] = testing::random_rational(rng, 2, 3);
    ASSERT_GE(evaluate(b.phi, a), 0);
  }
}

TEST(BuildPhi, PositiveOutsideTheCube) {
  Rng rng(33);
  const BoundedInstance b = build_phi(P("x1*x1 - 1"), 1);
  for (int trial = 0; trial < 200; ++trial) {
    ExactPoint a{{x1, testing::uniform_int(rng, 0, 1) ? 2 : -2}};
    for (const VarId& v : {y0, y1, z1}) a[v] = testing::random_rational(rng);
    ASSERT_GT(evaluate(b.phi, a), 0);
  }
}

TEST(ScaleRoot, OriginIsExact) {
  const BoundedInstance b = build_phi(P("x1"), 1);
  const ScaledRoot r = scale_root(b, ExactPoint{{x1, 0}});
  EXPECT_EQ(r.exact.at(x1), 0);
  EXPECT_EQ(r.exact.at(y0), make_rational(1, 2));
  EXPECT_EQ(r.exact.at(y1), make_rational(1, 4));
  ASSERT_TRUE(r.z_rational);
  EXPECT_EQ(r.full_exact().at(z1), 1);
  EXPECT_EQ(evaluate(b.phi, r.full_exact()), 0);
}

TEST(ScaleRoot, IrrationalSlack) {
  const BoundedInstance b = build_phi(P("x1*x1 - 1"), 1);
  const ScaledRoot r = scale_root(b, ExactPoint{{x1, 1}});
  EXPECT_EQ(r.exact.at(x1), make_rational(1, 4));
  EXPECT_FALSE(r.z_rational);
  EXPECT_NEAR(r.approx.at(z1), std::sqrt(15.0) / 4, 1e-15);
  EXPECT_EQ(evaluate_phi_exact(b, r), 0);
  EXPECT_LE(std::fabs(evaluate_phi_float(b, r.approx)), 1e-12);
}

TEST(ScaleRoot, BoundaryIsRejected) {
  const BoundedInstance b = build_phi(P("x1*x1 - 16"), 1);
  try {
    scale_root(b, ExactPoint{{x1, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_range);
  }
  EXPECT_NO_THROW(scale_root(b, ExactPoint{{x1, make_rational(399, 100)}}));
  EXPECT_THROW(scale_root(b, ExactPoint{}), Error);
}

TEST(ScaleRoot, RandomRationalRootsZeroPhi) {
  Rng rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    // (x1 - 1)(x2 + 1) vanishes on x1 = 1 for any x2.
    const Rational c = testing::random_rational(rng, 3, 3);
    const Polynomial f = P("x1*x2 + x1 - x2 - 1");
    const BoundedInstance b = build_phi(f, 2);
    const ScaledRoot r = scale_root(b, ExactPoint{{x1, 1}, {x_var(2), c}});
    EXPECT_EQ(evaluate_phi_exact(b, r), 0);
  }
}

}  // namespace
}  // namespace psdrank

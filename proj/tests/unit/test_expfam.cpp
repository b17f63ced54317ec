#include "shrinkvb/errors.hpp"
#include "shrinkvb/expfam.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

using namespace shrinkvb;

namespace {

MatrixXd random_spd(Index p, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  MatrixXd a(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) a(i, j) = z(rng);
  return a * a.transpose() + 0.5 * MatrixXd::Identity(p, p);
}

}  // namespace

TEST(GaussianToNatural, IdentityCase) {
  const auto n = gaussian_to_natural({VectorXd::Zero(2), MatrixXd::Identity(2, 2)});
  EXPECT_TRUE(n.eta1.isZero());
  EXPECT_TRUE(n.eta2.isApprox(-0.5 * MatrixXd::Identity(2, 2)));
}

TEST(GaussianToNatural, Scalar) {
  const auto n = gaussian_to_natural({VectorXd::Constant(1, 2.0), MatrixXd::Constant(1, 1, 4.0)});
  EXPECT_DOUBLE_EQ(n.eta1[0], 0.5);
  EXPECT_DOUBLE_EQ(n.eta2(0, 0), -0.125);
}

TEST(GaussianToNatural, TwoByTwo) {
  MatrixXd sigma(2, 2);
  sigma << 2, 1, 1, 2;
  const auto n = gaussian_to_natural({VectorXd::Ones(2), sigma});
  EXPECT_NEAR(n.eta1[0], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(n.eta1[1], 1.0 / 3.0, 1e-14);
  MatrixXd expected(2, 2);
  expected << 2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0;
  EXPECT_TRUE(n.eta2.isApprox(-0.5 * expected, 1e-14));
}

TEST(GaussianToNatural, RejectsIndefinite) {
  MatrixXd sigma(2, 2);
  sigma << 1, 2, 2, 1;
  EXPECT_THROW(gaussian_to_natural({VectorXd::Zero(2), sigma}), DomainError);
}

TEST(GaussianFromNatural, InverseExamples) {
  const auto m = gaussian_from_natural({VectorXd::Zero(2), -0.5 * MatrixXd::Identity(2, 2)});
  EXPECT_TRUE(m.mu.isZero());
  EXPECT_TRUE(m.sigma.isApprox(MatrixXd::Identity(2, 2)));
  const auto s = gaussian_from_natural({VectorXd::Constant(1, 0.5), MatrixXd::Constant(1, 1, -0.125)});
  EXPECT_NEAR(s.mu[0], 2.0, 1e-14);
  EXPECT_NEAR(s.sigma(0, 0), 4.0, 1e-14);
}

TEST(GaussianFromNatural, RejectsWrongSignAndSingular) {
  EXPECT_THROW(gaussian_from_natural({VectorXd::Zero(2), 0.5 * MatrixXd::Identity(2, 2)}), DomainError);
  EXPECT_THROW(gaussian_from_natural({VectorXd::Zero(2), MatrixXd::Zero(2, 2)}), DomainError);
  MatrixXd asym = -MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(gaussian_from_natural({VectorXd::Zero(2), asym}), DomainError);
}

TEST(GaussianNaturalProperty, RoundTripIsIdentity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    const Index p = 1 + trial % 6;
    GaussianMoment m{VectorXd::NullaryExpr(p, [&] { return z(rng); }), random_spd(p, rng)};
    const auto back = gaussian_from_natural(gaussian_to_natural(m));
    EXPECT_LT((back.mu - m.mu).norm(), 1e-10 * (1.0 + m.mu.norm()));
    EXPECT_LT((back.sigma - m.sigma).norm(), 1e-10 * m.sigma.norm());
  }
}

TEST(BlendNatural, Endpoints) {
  const GaussianNatural old{VectorXd::Constant(1, 0.0), MatrixXd::Constant(1, 1, -1.0)};
  const GaussianNatural target{VectorXd::Constant(1, 2.0), MatrixXd::Constant(1, 1, -3.0)};
  const auto one = blend_natural(old, target, 1.0);
  EXPECT_EQ(one.eta1, target.eta1);
  EXPECT_EQ(one.eta2, target.eta2);
  const auto tiny = blend_natural(old, target, 1e-12);
  EXPECT_NEAR(tiny.eta1[0], old.eta1[0], 1e-10);
  EXPECT_NEAR(tiny.eta2(0, 0), old.eta2(0, 0), 1e-10);
  EXPECT_DOUBLE_EQ(blend_natural(old, target, 0.25).eta1[0], 0.5);
}

TEST(BlendNatural, Errors) {
  const GaussianNatural a{VectorXd::Zero(1), -MatrixXd::Identity(1, 1)};
  const GaussianNatural b{VectorXd::Zero(2), -MatrixXd::Identity(2, 2)};
  EXPECT_THROW(blend_natural(a, b, 0.5), DomainError);
  EXPECT_THROW(blend_natural(a, a, 0.0), DomainError);
  EXPECT_THROW(blend_natural(a, a, 1.5), DomainError);
}

TEST(BlendNaturalProperty, FixedPointAndConvexity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Index p = 1 + trial % 5;
    const auto x = gaussian_to_natural({VectorXd::Ones(p), random_spd(p, rng)});
    const auto y = gaussian_to_natural({VectorXd::Zero(p), random_spd(p, rng)});
    const double rho = u(rng);
    const auto same = blend_natural(x, x, rho);
    EXPECT_LT((same.eta1 - x.eta1).norm(), 1e-12 * (1 + x.eta1.norm()));
    EXPECT_LT((same.eta2 - x.eta2).norm(), 1e-12 * x.eta2.norm());
    const auto mix = blend_natural(x, y, rho);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(mix.eta2);
    EXPECT_LT(eig.eigenvalues().maxCoeff(), 0.0);
  }
}

TEST(BlendGamma, Examples) {
  const auto t = GammaNatural{3.0, -3.0};
  const auto r1 = blend_gamma({1.0, -1.0}, t, 1.0);
  EXPECT_EQ(r1.shape_minus_one, 3.0);
  EXPECT_EQ(r1.neg_rate, -3.0);
  const auto half = blend_gamma({1.0, -1.0}, t, 0.5);
  EXPECT_DOUBLE_EQ(half.shape_minus_one, 2.0);
  EXPECT_DOUBLE_EQ(half.neg_rate, -2.0);
  EXPECT_TRUE(half.valid());
  EXPECT_THROW(blend_gamma({1.0, -1.0}, t, 0.0), DomainError);
}

TEST(BlendGammaProperty, StaysValid) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> shape(0.01, 10.0), rate(0.01, 10.0), rho(1e-6, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto a = GammaNatural::from_shape_rate(shape(rng), rate(rng));
    const auto b = GammaNatural::from_shape_rate(shape(rng), rate(rng));
    EXPECT_TRUE(blend_gamma(a, b, rho(rng)).valid());
  }
}

TEST(GammaNatural, ShapeRateRoundTrip) {
  const auto g = GammaNatural::from_shape_rate(2.5, 0.75);
  EXPECT_DOUBLE_EQ(g.shape(), 2.5);
  EXPECT_DOUBLE_EQ(g.rate(), 0.75);
}

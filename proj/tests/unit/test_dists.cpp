#include "shrinkvb/dists.hpp"
#include "shrinkvb/errors.hpp"
#include "shrinkvb/factors.hpp"
#include "shrinkvb/special.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace shrinkvb;

TEST(TruncNormalMean, Examples) {
  EXPECT_NEAR(trunc_normal_mean(0.0, TruncSide::positive), 0.79788456080286536, 1e-14);
  EXPECT_NEAR(trunc_normal_mean(0.0, TruncSide::negative), -0.79788456080286536, 1e-14);
  EXPECT_NEAR(trunc_normal_mean(2.0, TruncSide::positive), 2.0552478626789900, 1e-13);
  EXPECT_NEAR(trunc_normal_mean(-3.0, TruncSide::positive), 0.28309865493043651, 1e-13);
  EXPECT_NEAR(trunc_normal_mean(10.0, TruncSide::negative), -0.098093233962511963, 1e-13);
}

TEST(TruncNormalMean, RejectsNonFinite) {
  EXPECT_THROW(trunc_normal_mean(std::numeric_limits<double>::infinity(), TruncSide::positive),
               DomainError);
  EXPECT_THROW(trunc_normal_mean(std::nan(""), TruncSide::negative), DomainError);
}

TEST(TruncNormalMeanProperty, SideOrderingAndSymmetry) {
  for (double mu = -20.0; mu <= 20.0; mu += 0.05) {
    const double pos = trunc_normal_mean(mu, TruncSide::positive);
    const double neg = trunc_normal_mean(mu, TruncSide::negative);
    // The tail correction drops below one ulp of mu once |mu| is large.
    EXPECT_GE(pos, mu) << mu;
    EXPECT_LE(neg, mu) << mu;
    if (std::abs(mu) < 5.0) {
      EXPECT_GT(pos, mu) << mu;
      EXPECT_LT(neg, mu) << mu;
    }
    EXPECT_GT(pos, 0.0) << mu;
    EXPECT_LE(neg, 0.0) << mu;
    EXPECT_NEAR(trunc_normal_mean(-mu, TruncSide::negative), -pos, 1e-12 * (1.0 + std::abs(pos)));
  }
}

TEST(SampleTruncNormal, SupportAndTail) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_GT(sample_trunc_normal(0.0, TruncSide::positive, rng), 0.0);
    EXPECT_LE(sample_trunc_normal(0.0, TruncSide::negative, rng), 0.0);
  }
  for (double loc : {-10.0, -40.0, -300.0}) {
    for (int i = 0; i < 1000; ++i) {
      const double z = sample_trunc_normal(loc, TruncSide::positive, rng);
      ASSERT_TRUE(std::isfinite(z));
      ASSERT_GT(z, 0.0);
      const double w = sample_trunc_normal(-loc, TruncSide::negative, rng);
      ASSERT_TRUE(std::isfinite(w));
      ASSERT_LE(w, 0.0);
    }
  }
}

TEST(SampleTruncNormal, MeanMatchesClosedForm) {
  Rng rng(2024);
  for (double loc : {0.0, 1.5, -2.0, -6.0}) {
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = sample_trunc_normal(loc, TruncSide::positive, rng);
      sum += z;
      sum2 += z * z;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, trunc_normal_mean(loc, TruncSide::positive), 4.0 * se) << loc;
  }
}

TEST(Samplers, DeterministicPerSeed) {
  Rng a(77), b(77);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_trunc_normal(0.3, TruncSide::negative, a),
              sample_trunc_normal(0.3, TruncSide::negative, b));
    EXPECT_EQ(sample_gamma(2.0, 3.0, a), sample_gamma(2.0, 3.0, b));
    EXPECT_EQ(sample_inverse_gaussian(1.5, 2.0, a), sample_inverse_gaussian(1.5, 2.0, b));
  }
}

TEST(Samplers, GammaAndInverseGaussianMoments) {
  Rng rng(9);
  const int n = 200000;
  double g = 0.0, ig = 0.0, ig_inv = 0.0;
  for (int i = 0; i < n; ++i) {
    g += sample_gamma(0.5, 2.0, rng);
    const double x = sample_inverse_gaussian(1.5, 2.0, rng);
    ig += x;
    ig_inv += 1.0 / x;
  }
  // Gamma(0.5, rate 2): mean 0.25, sd 0.354; IG(1.5, 2): mean 1.5, E[1/x] = 1/1.5 + 1/2.
  EXPECT_NEAR(g / n, 0.25, 4.0 * 0.354 / std::sqrt(n));
  EXPECT_NEAR(ig / n, 1.5, 4.0 * std::sqrt(1.5 * 1.5 * 1.5 / 2.0 / n));
  EXPECT_NEAR(ig_inv / n, 1.0 / 1.5 + 0.5, 0.01);
}

TEST(GammaMoments, Examples) {
  EXPECT_DOUBLE_EQ(gamma_mean(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(gamma_mean(3.0, 6.0), 0.5);
  EXPECT_DOUBLE_EQ(gamma_mean(4.0, 10.0), gamma_mean(2.0, 5.0));
  EXPECT_THROW(gamma_mean(0.0, 1.0), DomainError);
  EXPECT_THROW(gamma_mean(1.0, -1.0), DomainError);

  EXPECT_NEAR(gamma_mean_log(1.0, 1.0), -0.5772156649015329, 1e-14);
  EXPECT_NEAR(gamma_mean_log(2.5, 7.0) - gamma_mean_log(2.5, 1.0), -std::log(7.0), 1e-14);
  EXPECT_NEAR(gamma_mean_log(0.5, 1.0), -1.9635100260214235, 1e-14);
  EXPECT_THROW(gamma_mean_log(-1.0, 1.0), DomainError);

  EXPECT_DOUBLE_EQ(inv_gamma_mean_reciprocal(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(inv_gamma_mean_reciprocal(0.5, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(inv_gamma_mean_reciprocal(3.0, 4.0), gamma_mean(3.0, 4.0));
  EXPECT_THROW(inv_gamma_mean_reciprocal(1.0, 0.0), DomainError);
}

TEST(Factors, InverseGaussianMeanLogMatchesMonteCarlo) {
  // E[log x] for IG(mean 0.8, shape 1.3) by simulation against the closed form.
  const InverseGaussianFactor f{0.8, 1.3};
  Rng rng(4);
  const int n = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = std::log(sample_inverse_gaussian(f.mean, f.shape, rng));
    sum += l;
    sum2 += l * l;
  }
  const double m = sum / n;
  const double se = std::sqrt((sum2 / n - m * m) / n);
  EXPECT_NEAR(f.mean_log(), m, 4.0 * se);
}

TEST(Factors, GammaEntropyAgainstClosedForm) {
  // Gamma(2, rate 3): a - log b + lgamma(a) + (1 - a) digamma(a).
  const GammaFactor g{2.0, 3.0};
  const double expected = 2.0 - std::log(3.0) + std::lgamma(2.0) - special::digamma(2.0);
  EXPECT_NEAR(g.entropy(), expected, 1e-14);
  const NormalFactor n{0.0, 4.0};
  EXPECT_NEAR(n.entropy(), 0.5 * std::log(2.0 * M_PI * M_E * 4.0), 1e-14);
}

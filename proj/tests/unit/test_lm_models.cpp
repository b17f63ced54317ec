#include "shrinkvb/errors.hpp"
#include "shrinkvb/lm_models.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>

using namespace shrinkvb;
using shrinkvb::testing::sparse_lm;
using shrinkvb::testing::worst_elbo_drop;

namespace {

FitSpec fixed_ridge(double lambda, double tau, CoeffFamily family = CoeffFamily::correlated) {
  FitSpec spec{Prior::ridge, family, {}};
  spec.hyper.fixed_lambda = lambda;
  spec.hyper.fixed_tau = tau;
  return spec;
}

/// Exact posterior mean of (b0, b) for the Gaussian model with known
/// precisions.
VectorXd exact_posterior_mean(const RegressionData& d, double lambda, double tau, double var_b0) {
  MatrixXd z(d.n(), d.p() + 1);
  z.col(0).setOnes();
  z.rightCols(d.p()) = d.X;
  MatrixXd prec = tau * z.transpose() * z;
  prec(0, 0) += 1.0 / var_b0;
  prec.diagonal().tail(d.p()).array() += lambda;
  return prec.llt().solve(tau * z.transpose() * d.y);
}

RegressionData tiny_data(const VectorXd& x) {
  RegressionData d;
  d.X = x;
  d.y = (VectorXd(5) << 1.0, 2.1, 0.2, 3.3, 0.4).finished();
  return d;
}

}  // namespace

TEST(RegressionData, Validation) {
  RegressionData d{MatrixXd::Zero(3, 2), VectorXd::Zero(2)};
  EXPECT_THROW(d.validate(), DomainError);
  d.y = VectorXd::Zero(3);
  d.X(1, 1) = std::nan("");
  EXPECT_THROW(d.validate(), DomainError);
}

TEST(LmCavi, ElboMonotoneAcrossPriorsAndFamilies) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto data = sparse_lm(200, 20, seed);
    for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
      for (CoeffFamily family : {CoeffFamily::correlated, CoeffFamily::independent}) {
        const auto fit = fit_lm_cavi(data, {prior, family, {}}, 300, 1e-10);
        EXPECT_LT(worst_elbo_drop(fit.elbo), 1e-8) << to_string(prior) << "/" << to_string(family);
        EXPECT_GE(fit.elbo.back(), fit.elbo.front());
      }
    }
  }
}

TEST(LmCavi, FixedPrecisionMeansMatchClosedForm) {
  const auto data = sparse_lm(150, 8, 4);
  const double lambda = 2.0, tau = 0.7;
  const auto fit = fit_lm_cavi(data, fixed_ridge(lambda, tau), 5000, 1e-15);
  const VectorXd exact = exact_posterior_mean(data, lambda, tau, PriorHyper{}.var_b0);
  EXPECT_NEAR(fit.b0.mean, exact[0], 1e-8);
  EXPECT_LT((fit.b.mu - exact.tail(8)).lpNorm<Eigen::Infinity>(), 1e-8);
  // Coefficient covariance of the correlated family is (tau X^T X + lambda I)^-1.
  const MatrixXd prec = tau * data.X.transpose() * data.X + lambda * MatrixXd::Identity(8, 8);
  EXPECT_LT((fit.b.sigma - prec.inverse()).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(LmCavi, ZeroColumnGivesZeroMean) {
  RegressionData d{MatrixXd::Zero(20, 1), VectorXd::LinSpaced(20, -1.0, 3.0)};
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const auto fit = fit_lm_cavi(d, {prior, CoeffFamily::correlated, {}}, 200, 1e-8);
    EXPECT_NEAR(fit.b.mu[0], 0.0, 1e-14) << to_string(prior);
  }
}

TEST(LmElbo, BelowLogEvidenceOnConjugateCase) {
  // Log evidence of y ~ N(0, I/tau + var_b0 11^T + x x^T / lambda) computed
  // independently in double precision with numpy.
  const auto data = tiny_data((VectorXd(5) << 0.5, 1.2, -0.3, 2.0, 0.1).finished());
  const auto fit = fit_lm_cavi(data, fixed_ridge(1.5, 2.0), 5000, 1e-14);
  const double log_evidence = -13.068008323677736;
  EXPECT_LE(fit.elbo.back(), log_evidence + 1e-9);
  EXPECT_GT(fit.elbo.back(), log_evidence - 1.0);
}

TEST(LmElbo, TightWhenPredictorOrthogonalToIntercept) {
  // x sums to zero, so the posterior of (b0, b) factorizes and the bound is exact.
  const auto data = tiny_data((VectorXd(5) << -2.0, -1.0, 0.0, 1.0, 2.0).finished());
  const auto fit = fit_lm_cavi(data, fixed_ridge(1.5, 2.0), 5000, 1e-14);
  EXPECT_NEAR(fit.elbo.back(), -18.952167483231502, 1e-8);
}

TEST(LmCavi, InterceptAbsorbsResponseShift) {
  const auto data = sparse_lm(100, 5, 8);
  RegressionData shifted = data;
  shifted.y.array() += 25.0;
  const FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  const auto a = fit_lm_cavi(data, spec, 2000, 1e-12);
  const auto b = fit_lm_cavi(shifted, spec, 2000, 1e-12);
  EXPECT_LT((a.b.mu - b.b.mu).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_NEAR(b.b0.mean - a.b0.mean, 25.0, 1e-4);
  EXPECT_NE(a.elbo.back(), b.elbo.back());
}

TEST(LmCavi, IndependentEqualsCorrelatedOnOrthogonalDesign) {
  // Orthogonal columns that are also orthogonal to the intercept.
  MatrixXd base(40, 6);
  base.col(0).setOnes();
  base.rightCols(5) = MatrixXd::Random(40, 5);
  Eigen::HouseholderQR<MatrixXd> qr(base);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(40, 6);
  const MatrixXd x = q.rightCols(5) * 4.0;
  RegressionData d{x, x * (VectorXd(5) << 1, -2, 0, 0, 0.5).finished() + 0.1 * VectorXd::Random(40)};
  d.y.array() += 1.0;
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const auto cor = fit_lm_cavi(d, {prior, CoeffFamily::correlated, {}}, 400, 1e-14);
    const auto ind = fit_lm_cavi(d, {prior, CoeffFamily::independent, {}}, 400, 1e-14);
    EXPECT_LT((cor.b.mu - ind.b.mu).lpNorm<Eigen::Infinity>(), 1e-8) << to_string(prior);
    EXPECT_LT((cor.b.marginal_var() - ind.b.var).lpNorm<Eigen::Infinity>(), 1e-8) << to_string(prior);
    EXPECT_NEAR(cor.elbo.back(), ind.elbo.back(), 1e-8 * std::abs(cor.elbo.back())) << to_string(prior);
  }
}

TEST(LmCavi, CovarianceSpdEverySweep) {
  const auto data = sparse_lm(60, 12, 5);
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    LmVariational state(data, {prior, CoeffFamily::correlated, {}});
    for (int sweep = 0; sweep < 40; ++sweep) {
      state.cavi_sweep();
      const MatrixXd& s = state.core().coefficients().sigma;
      EXPECT_LT((s - s.transpose()).norm(), 1e-12 * s.norm());
      EXPECT_EQ(s.llt().info(), Eigen::Success);
    }
  }
}

TEST(LmCavi, NotConvergedIsFlaggedNotThrown) {
  const auto data = sparse_lm(100, 10, 6);
  const auto fit = fit_lm_cavi(data, {Prior::horseshoe, CoeffFamily::correlated, {}}, 3, 1e-12);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.iterations, 3);
  EXPECT_EQ(fit.elbo.size(), 3u);
}

TEST(LmCavi, WideDesignAndConstantColumn) {
  auto data = sparse_lm(15, 40, 7);
  data.X.col(3).setConstant(2.0);
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const auto fit = fit_lm_cavi(data, {prior, CoeffFamily::correlated, {}}, 200, 1e-6);
    EXPECT_TRUE(fit.b.mu.allFinite());
  }
}

TEST(LmGibbs, PositiveDrawsAndDeterminism) {
  const auto data = sparse_lm(100, 5, 9);
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const FitSpec spec{prior, CoeffFamily::correlated, {}};
    const auto a = fit_lm_gibbs(data, spec, 600, 100, 42);
    const auto b = fit_lm_gibbs(data, spec, 600, 100, 42);
    EXPECT_EQ(a.kept(), 500);
    EXPECT_TRUE((a.lambda.array() > 0.0).all());
    EXPECT_TRUE((a.tau.array() > 0.0).all());
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.tau, b.tau);
    if (prior != Prior::ridge) {
      EXPECT_EQ(a.local_scales.cols(), 5);
      EXPECT_TRUE((a.local_scales.array() > 0.0).all());
    }
  }
}

TEST(LmGibbs, InvalidBurnIn) {
  const auto data = sparse_lm(30, 3, 1);
  EXPECT_THROW(fit_lm_gibbs(data, {}, 100, 100, 1), DomainError);
}

TEST(LmGibbs, SingularPrecisionNamesIteration) {
  auto data = sparse_lm(30, 3, 1);
  data.X.col(2) = data.X.col(1);
  FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  spec.hyper.fixed_lambda = 1e-300;
  try {
    fit_lm_gibbs(data, spec, 10, 5, 1);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos) << e.what();
  }
}

TEST(LmGibbs, AgreesWithCavi) {
  const auto data = sparse_lm(1000, 20, 10);
  const FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  const auto draws = fit_lm_gibbs(data, spec, 3000, 1000, 3);
  const auto fit = fit_lm_cavi(data, spec, 1000, 1e-8);
  const VectorXd gibbs_mean = draws.b.colwise().mean().transpose();
  EXPECT_LT((gibbs_mean - fit.b.mu).lpNorm<Eigen::Infinity>(), 0.1);
}

TEST(LmSvi, FullBatchUnitStepMatchesCaviSweep) {
  const auto data = sparse_lm(80, 6, 11);
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const FitSpec spec{prior, CoeffFamily::correlated, {}};
    LmVariational cavi(data, spec), svi(data, spec);
    std::vector<Index> all(80);
    for (Index i = 0; i < 80; ++i) all[static_cast<std::size_t>(i)] = i;
    cavi.cavi_sweep();
    svi.stochastic_step(all, 1.0);
    EXPECT_LT((cavi.core().coefficients().mu - svi.core().coefficients().mu).lpNorm<Eigen::Infinity>(),
              1e-8);
  }
}

TEST(LmSvi, ApproachesCaviOnLargeData) {
  const auto data = sparse_lm(1000, 10, 12, 0.0);
  const FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  const auto cavi = fit_lm_cavi(data, spec, 1000, 1e-10);
  const auto svi = fit_lm_svi(data, spec, 3000, 100, StepSchedule::constant(), 5);
  EXPECT_EQ(svi.elbo.size(), 3000u);
  EXPECT_LT((cavi.b.mu - svi.b.mu).lpNorm<Eigen::Infinity>(), 0.05);
}

TEST(LmSvi, BatchLargerThanDataRejected) {
  const auto data = sparse_lm(20, 3, 1);
  EXPECT_THROW(fit_lm_svi(data, {}, 10, 21), DomainError);
}

TEST(LmSvi, DeterministicPerSeed) {
  const auto data = sparse_lm(200, 5, 2);
  const FitSpec spec{Prior::lasso, CoeffFamily::independent, {}};
  const auto a = fit_lm_svi(data, spec, 200, 20, StepSchedule::decaying(1.0, 0.7), 8);
  const auto b = fit_lm_svi(data, spec, 200, 20, StepSchedule::decaying(1.0, 0.7), 8);
  EXPECT_EQ(a.b.mu, b.b.mu);
  EXPECT_EQ(a.elbo, b.elbo);
}

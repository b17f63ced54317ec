#include "shrinkvb/errors.hpp"
#include "shrinkvb/posterior.hpp"
#include "shrinkvb/probit_models.hpp"
#include "shrinkvb/simbench.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace shrinkvb;
using shrinkvb::testing::sparse_binary;
using shrinkvb::testing::worst_elbo_drop;

namespace {

constexpr double kHalfNormalMean = 0.79788456080286536;

GaussianNatural zero_natural(Index p) { return {VectorXd::Zero(p), MatrixXd::Zero(p, p)}; }

double max_abs(const GaussianNatural& g) {
  return std::max(g.eta1.lpNorm<Eigen::Infinity>(), g.eta2.lpNorm<Eigen::Infinity>());
}

}  // namespace

TEST(BinaryData, RejectsNonBinaryResponse) {
  BinaryData d{MatrixXd::Zero(3, 1), (VectorXd(3) << 0, 1, 2).finished()};
  EXPECT_THROW(d.validate(), DomainError);
  d.y[2] = 0.5;
  EXPECT_THROW(d.validate(), DomainError);
}

TEST(UpdateLatents, Examples) {
  BinaryData d{MatrixXd::Zero(4, 2), (VectorXd(4) << 1, 0, 1, 1).finished()};
  const auto lat = update_latents(d, VectorXd::Zero(2), 0.0);
  EXPECT_NEAR(lat.z_mean[0], kHalfNormalMean, 1e-14);
  EXPECT_NEAR(lat.z_mean[1], -kHalfNormalMean, 1e-14);
  BinaryData ones{MatrixXd::Random(6, 3), VectorXd::Ones(6)};
  const auto all = update_latents(ones, VectorXd::Zero(3), 0.0);
  for (Index i = 0; i < 6; ++i) EXPECT_NEAR(all.z_mean[i], kHalfNormalMean, 1e-14);
}

TEST(UpdateLatents, SideConsistency) {
  const auto data = sparse_binary(300, 5, 2, 3);
  const VectorXd coeff = VectorXd::LinSpaced(5, -2.0, 2.0);
  const auto lat = update_latents(data, coeff, 0.4);
  for (Index i = 0; i < data.n(); ++i) {
    const double shift = lat.z_mean[i] - lat.location[i];
    if (data.y[i] == 1.0) {
      EXPECT_GE(shift, 0.0);
      if (lat.location[i] < 5.0) EXPECT_GT(shift, 0.0);
    } else {
      EXPECT_LE(shift, 0.0);
      if (lat.location[i] > -5.0) EXPECT_LT(shift, 0.0);
    }
  }
}

TEST(NaturalGradient, SinglePointExample) {
  BinaryData d{MatrixXd::Ones(1, 1), VectorXd::Ones(1)};
  LatentState lat{VectorXd::Zero(1), VectorXd::Constant(1, 0.5)};
  const auto g = natural_gradient_b(d, lat, 1.0, zero_natural(1));
  EXPECT_DOUBLE_EQ(g.eta1[0], 0.5);
  EXPECT_DOUBLE_EQ(g.eta2(0, 0), -1.0);
}

TEST(NaturalGradient, ZeroAtTarget) {
  const auto data = sparse_binary(50, 4, 1, 5);
  const auto lat = update_latents(data, VectorXd::Zero(4), 0.0);
  const auto target = natural_gradient_b(data, lat, 2.0, zero_natural(4));
  const auto g = natural_gradient_b(data, lat, 2.0, target);
  EXPECT_LT(max_abs(g), 1e-12);
}

TEST(NaturalGradient, DoublingRowsDoublesDataBlocks) {
  const auto data = sparse_binary(30, 3, 0, 6);
  BinaryData twice{MatrixXd(60, 3), VectorXd(60)};
  twice.X << data.X, data.X;
  twice.y << data.y, data.y;
  const double e_lambda = 1.3;
  const auto lat1 = update_latents(data, VectorXd::Zero(3), 0.0);
  const auto lat2 = update_latents(twice, VectorXd::Zero(3), 0.0);
  const auto g1 = natural_gradient_b(data, lat1, e_lambda, zero_natural(3));
  const auto g2 = natural_gradient_b(twice, lat2, e_lambda, zero_natural(3));
  EXPECT_LT((g2.eta1 - 2.0 * g1.eta1).norm(), 1e-12);
  const MatrixXd prior = -0.5 * e_lambda * MatrixXd::Identity(3, 3);
  EXPECT_LT(((g2.eta2 - prior) - 2.0 * (g1.eta2 - prior)).norm(), 1e-12);
}

TEST(SviStep, FullBatchUnitStepIsCaviUpdate) {
  const auto data = sparse_binary(40, 4, 1, 7);
  const auto lat = update_latents(data, VectorXd::Constant(4, 0.1), 0.2);
  const GaussianNatural current{VectorXd::Constant(4, 0.3), -0.5 * MatrixXd::Identity(4, 4)};
  const auto target = natural_gradient_b(data, lat, 1.5, zero_natural(4), 0.2);
  const auto step = svi_step_b(data.X, lat.z_mean, 1.5, current, 1.0, 40, 0.2);
  EXPECT_LT((step.eta1 - target.eta1).norm(), 1e-12);
  EXPECT_LT((step.eta2 - target.eta2).norm(), 1e-12);
  const auto tiny = svi_step_b(data.X, lat.z_mean, 1.5, current, 1e-12, 40, 0.2);
  EXPECT_LT((tiny.eta1 - current.eta1).norm(), 1e-10);
  EXPECT_LT((tiny.eta2 - current.eta2).norm(), 1e-10);
}

TEST(SviStep, SinglePointTargetsAreUnbiased) {
  const auto data = sparse_binary(10, 3, 0, 8);
  const auto lat = update_latents(data, VectorXd::Constant(3, -0.2), 0.1);
  const VectorXd prior = VectorXd::Constant(3, 0.8);
  const auto full = svi_target_b(data.X, lat.z_mean, 0.1, prior, 10);
  GaussianNatural avg = zero_natural(3);
  for (Index i = 0; i < 10; ++i) {
    const auto t = svi_target_b(data.X.row(i), lat.z_mean.segment(i, 1), 0.1, prior, 10);
    avg.eta1 += t.eta1 / 10.0;
    avg.eta2 += t.eta2 / 10.0;
  }
  EXPECT_LT((avg.eta1 - full.eta1).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_LT((avg.eta2 - full.eta2).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(SviStep, EmptyBatchRejected) {
  const GaussianNatural current{VectorXd::Zero(2), -MatrixXd::Identity(2, 2)};
  EXPECT_THROW(svi_step_b(MatrixXd(0, 2), VectorXd(0), 1.0, current, 0.5, 10), DomainError);
}

TEST(ProbitCavi, ElboMonotone) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto data = sparse_binary(200, 20, 16, seed);
    for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
      for (CoeffFamily family : {CoeffFamily::correlated, CoeffFamily::independent}) {
        const auto fit = fit_probit_cavi(data, {prior, family, {}}, 300, 1e-10);
        EXPECT_LT(worst_elbo_drop(fit.elbo), 1e-8) << to_string(prior) << "/" << to_string(family);
      }
    }
  }
}

TEST(ProbitCavi, SymmetricDataGivesZeroMeans) {
  BinaryData d{MatrixXd::Zero(20, 3), VectorXd(20)};
  for (Index i = 0; i < 20; ++i) d.y[i] = i % 2;
  const auto fit = fit_probit_cavi(d, {}, 500, 1e-12);
  EXPECT_NEAR(fit.b0.mean, 0.0, 1e-10);
  EXPECT_LT(fit.b.mu.lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(ProbitCavi, NaturalGradientVanishesAtFixedPoint) {
  const auto data = sparse_binary(150, 4, 1, 9);
  FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  ProbitVariational state(data, spec);
  for (int sweep = 0; sweep < 3000; ++sweep) state.cavi_sweep();
  const auto fit = state.result();
  const auto& lat = state.latents();
  const auto g = natural_gradient_b(data, lat, fit.lambda->mean(), state.coefficient_natural(),
                                    fit.b0.mean);
  EXPECT_LT(max_abs(g), 1e-10);
}

TEST(ProbitCavi, LatentSideConsistencyAfterSweeps) {
  const auto data = sparse_binary(100, 5, 2, 10);
  ProbitVariational state(data, {Prior::horseshoe, CoeffFamily::independent, {}});
  for (int sweep = 0; sweep < 10; ++sweep) {
    state.cavi_sweep();
    const auto& lat = state.latents();
    for (Index i = 0; i < data.n(); ++i) {
      ASSERT_EQ(lat.z_mean[i] > lat.location[i], data.y[i] == 1.0);
    }
  }
}

TEST(ProbitGibbs, SeparableDataPushesInterceptUp) {
  BinaryData d{MatrixXd::Random(50, 2), VectorXd::Ones(50)};
  const auto draws = fit_probit_gibbs(d, {}, 1000, 200, 4);
  EXPECT_GT(draws.b0.mean(), 0.0);
  EXPECT_EQ(draws.tau.size(), 0);
  EXPECT_TRUE((draws.lambda.array() > 0.0).all());
}

TEST(ProbitGibbs, DeterministicPerSeed) {
  const auto data = sparse_binary(80, 4, 2, 11);
  for (Prior prior : {Prior::ridge, Prior::lasso, Prior::horseshoe}) {
    const auto a = fit_probit_gibbs(data, {prior, CoeffFamily::correlated, {}}, 300, 100, 7);
    const auto b = fit_probit_gibbs(data, {prior, CoeffFamily::correlated, {}}, 300, 100, 7);
    EXPECT_EQ(a.b, b.b);
    EXPECT_EQ(a.b0, b.b0);
  }
}

TEST(ProbitSvi, FullBatchUnitStepTracksCavi) {
  const auto data = sparse_binary(60, 5, 2, 12);
  const FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  ProbitVariational cavi(data, spec), svi(data, spec);
  std::vector<Index> all(60);
  for (Index i = 0; i < 60; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int sweep = 0; sweep < 3; ++sweep) {
    cavi.cavi_sweep();
    svi.stochastic_step(all, 1.0);
    const auto a = cavi.coefficient_natural();
    const auto b = svi.coefficient_natural();
    EXPECT_LT((a.eta1 - b.eta1).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_LT((a.eta2 - b.eta2).lpNorm<Eigen::Infinity>(), 1e-8);
  }
}

TEST(ProbitSvi, AucPrCloseToCavi) {
  BinarySimDesign design;
  design.n = 2000;
  design.p = 20;
  design.n_zero = 16;
  design.seed = 13;
  const auto sim = gen_binary_data(design);
  const BinaryData data{sim.X, sim.y};
  const FitSpec spec{Prior::ridge, CoeffFamily::correlated, {}};
  const auto cavi = fit_probit_cavi(data, spec, 500, 1e-6);
  const auto svi = fit_probit_svi(data, spec, 3000, 100, StepSchedule::constant(), 1);

  Rng rng(99);
  const MatrixXd x_test = gen_design_matrix(1000, 20, 0.5, rng);
  const VectorXd y_test = draw_binary_response(x_test, sim.b_true, sim.b0_true, BinaryLink::probit, rng);
  std::vector<int> labels;
  for (Index i = 0; i < y_test.size(); ++i) labels.push_back(static_cast<int>(y_test[i]));
  auto score = [&](const VariationalFit& f) {
    const VectorXd p = predict_probit(f, x_test);
    return auc_pr(labels, std::vector<double>(p.data(), p.data() + p.size()));
  };
  EXPECT_NEAR(score(svi), score(cavi), 0.05);
}

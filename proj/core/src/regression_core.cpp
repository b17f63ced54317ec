#include "shrinkvb/regression_core.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/special.hpp"

#include <cmath>

namespace shrinkvb::detail {

RegressionCore::RegressionCore(const MatrixXd& x, const FitSpec& spec, double b0_init)
    : x_(&x), spec_(spec), prior_(spec.prior, spec.hyper, x.cols()) {
  const Index p = x.cols();
  b0_ = {b0_init, 1.0};
  b_.family = spec.family;
  b_.mu = VectorXd::Zero(p);
  if (spec.family == CoeffFamily::correlated) {
    b_.sigma = MatrixXd::Identity(p, p);
    log_det_sigma_ = 0.0;
  } else {
    b_.var = VectorXd::Ones(p);
  }
}

const MatrixXd& RegressionCore::gram() {
  if (!gram_) {
    MatrixXd g = MatrixXd::Zero(x_->cols(), x_->cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x_->transpose());
    gram_ = g.selfadjointView<Eigen::Lower>();
  }
  return *gram_;
}

const VectorXd& RegressionCore::column_sums() {
  if (!column_sums_) column_sums_ = x_->colwise().sum().transpose();
  return *column_sums_;
}

void RegressionCore::set_correlated(VectorXd mu, MatrixXd sigma, double log_det) {
  b_.mu = std::move(mu);
  b_.sigma = std::move(sigma);
  log_det_sigma_ = log_det;
}

void RegressionCore::update_intercept_exact(double sum_t, double c) {
  const double n = static_cast<double>(x_->rows());
  const double precision = c * n + 1.0 / spec_.hyper.var_b0;
  b0_.var = 1.0 / precision;
  b0_.mean = c * (sum_t - column_sums().dot(b_.mu)) / precision;
}

void RegressionCore::update_coefficients_exact(const VectorXd& xt_t, double c) {
  const MatrixXd& g = gram();
  const VectorXd rhs = c * (xt_t - b0_.mean * column_sums());
  const VectorXd prior_precision = prior_.expected_prior_precision();
  if (b_.family == CoeffFamily::correlated) {
    MatrixXd precision = c * g;
    precision.diagonal() += prior_precision;
    Eigen::LLT<MatrixXd> llt;
    try {
      llt = spd_factor(precision);
    } catch (const DomainError& e) {
      throw NumericalError(std::string("coefficient precision: ") + e.what());
    }
    set_correlated(llt.solve(rhs), spd_inverse(llt), -spd_log_det(llt));
    return;
  }
  // Independent family: sequential coordinate updates with G mu maintained
  // incrementally.
  VectorXd g_mu = g * b_.mu;
  for (Index j = 0; j < b_.size(); ++j) {
    const double precision = c * g(j, j) + prior_precision[j];
    const double old = b_.mu[j];
    const double others = g_mu[j] - g(j, j) * old;
    b_.var[j] = 1.0 / precision;
    b_.mu[j] = (rhs[j] - c * others) / precision;
    g_mu += g.col(j) * (b_.mu[j] - old);
  }
}

void RegressionCore::update_intercept_stochastic(const MatrixXd& xb, const VectorXd& tb,
                                                 double c, Index n_total, double rho) {
  const double scale = static_cast<double>(n_total) / static_cast<double>(xb.rows());
  const double target_precision = c * static_cast<double>(n_total) + 1.0 / spec_.hyper.var_b0;
  const double target_eta1 = c * scale * (tb - xb * b_.mu).sum();
  const double precision =
      blend_scalar(1.0 / b0_.var, target_precision, rho);
  const double eta1 = blend_scalar(b0_.mean / b0_.var, target_eta1, rho);
  b0_.var = 1.0 / precision;
  b0_.mean = eta1 / precision;
}

void RegressionCore::update_coefficients_stochastic(const MatrixXd& xb, const VectorXd& tb,
                                                    double c, double scale, double rho) {
  const VectorXd prior_precision = prior_.expected_prior_precision();
  const VectorXd centered = tb.array() - b0_.mean;
  if (b_.family == CoeffFamily::correlated) {
    GaussianNatural target;
    target.eta1 = c * scale * (xb.transpose() * centered);
    MatrixXd precision = MatrixXd::Zero(xb.cols(), xb.cols());
    precision.selfadjointView<Eigen::Lower>().rankUpdate(xb.transpose(), c * scale);
    precision = precision.selfadjointView<Eigen::Lower>();
    precision.diagonal() += prior_precision;
    target.eta2 = -0.5 * precision;
    GaussianMoment moment;
    try {
      moment = gaussian_from_natural(blend_natural(coefficient_natural(), target, rho));
    } catch (const DomainError& e) {
      throw NumericalError(std::string("stochastic coefficient step: ") + e.what());
    }
    const double log_det = spd_log_det(spd_factor(moment.sigma));
    set_correlated(std::move(moment.mu), std::move(moment.sigma), log_det);
    return;
  }
  VectorXd residual = centered - xb * b_.mu;
  for (Index j = 0; j < b_.size(); ++j) {
    const auto col = xb.col(j);
    const double old = b_.mu[j];
    const double target_precision = c * scale * col.squaredNorm() + prior_precision[j];
    const double target_eta1 = c * scale * col.dot(residual + col * old);
    const double precision = blend_scalar(1.0 / b_.var[j], target_precision, rho);
    const double eta1 = blend_scalar(old / b_.var[j], target_eta1, rho);
    b_.var[j] = 1.0 / precision;
    b_.mu[j] = eta1 / precision;
    residual -= col * (b_.mu[j] - old);
  }
}

void RegressionCore::update_prior(double rho) {
  prior_.update_locals(b_.second_moment(), rho);
  prior_.update_global(b_.second_moment(), rho);
}

double RegressionCore::expected_sq_residual_full(const VectorXd& t) {
  const MatrixXd& g = gram();
  const double n = static_cast<double>(x_->rows());
  const double fit_term = (t.array() - b0_.mean - (*x_ * b_.mu).array()).matrix().squaredNorm();
  double spread;
  if (b_.family == CoeffFamily::correlated) {
    spread = g.cwiseProduct(b_.sigma).sum();
  } else {
    spread = g.diagonal().dot(b_.var);
  }
  return fit_term + n * b0_.var + spread;
}

double RegressionCore::expected_sq_residual(const MatrixXd& xb, const VectorXd& tb) const {
  const double fit_term = (tb.array() - b0_.mean - (xb * b_.mu).array()).matrix().squaredNorm();
  return fit_term + static_cast<double>(xb.rows()) * b0_.var +
         b_.quadratic_form_rows(xb).sum();
}

VectorXd RegressionCore::predictor_mean(const MatrixXd& x) const {
  return (x * b_.mu).array() + b0_.mean;
}

VectorXd RegressionCore::predictor_variance(const MatrixXd& x) const {
  return b_.quadratic_form_rows(x).array() + b0_.var;
}

double RegressionCore::elbo_parameter_terms() const {
  const double var_b0 = spec_.hyper.var_b0;
  double total = -0.5 * (special::kLog2Pi + std::log(var_b0)) - b0_.second_moment() / (2.0 * var_b0);
  total += b0_.entropy();
  const double p = static_cast<double>(b_.size());
  if (b_.family == CoeffFamily::correlated) {
    total += 0.5 * (p * (special::kLog2Pi + 1.0) + log_det_sigma_);
  } else {
    total += 0.5 * (p * (special::kLog2Pi + 1.0) + b_.var.array().log().sum());
  }
  total += prior_.elbo(b_.second_moment());
  return total;
}

GaussianNatural RegressionCore::coefficient_natural() const {
  if (b_.family == CoeffFamily::correlated) {
    return gaussian_to_natural({b_.mu, b_.sigma});
  }
  GaussianNatural n;
  n.eta1 = b_.mu.cwiseQuotient(b_.var);
  n.eta2 = MatrixXd(VectorXd(-0.5 * b_.var.cwiseInverse()).asDiagonal());
  return n;
}

void RegressionCore::export_to(VariationalFit& fit) const {
  fit.prior = spec_.prior;
  fit.b0 = b0_;
  fit.b = b_;
  fit.lambda = prior_.lambda_factor();
  fit.lambda_fixed = prior_.fixed_lambda();
  fit.lasso_scales = prior_.lasso_locals();
  fit.hs_local_scales.clear();
  fit.hs_nu.clear();
  fit.hs_xi.reset();
  if (spec_.prior == Prior::horseshoe) {
    // Report precisions as the inverse-gamma variances of the hierarchy.
    for (const auto& g : prior_.hs_locals()) fit.hs_local_scales.push_back({g.shape, g.rate});
    for (const auto& g : prior_.hs_local_aux()) fit.hs_nu.push_back({g.shape, g.rate});
    if (!prior_.lambda_fixed()) {
      fit.hs_xi = InverseGammaFactor{prior_.hs_global_aux().shape, prior_.hs_global_aux().rate};
    }
  }
}

}  // namespace shrinkvb::detail

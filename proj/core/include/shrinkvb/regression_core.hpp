#pragma once

// Intercept, coefficient and prior factors shared by the normal-link and
// probit variational fits. Both models reduce to a Gaussian regression of a
// pseudo-response t on X with noise precision c: t = y and c = E[tau] for the
// normal link, t = E[z] and c = 1 for the probit link.

#include "shrinkvb/expfam.hpp"
#include "shrinkvb/factors.hpp"
#include "shrinkvb/fit.hpp"
#include "shrinkvb/shrinkage.hpp"
#include "shrinkvb/types.hpp"

#include <optional>

namespace shrinkvb::detail {

class RegressionCore {
 public:
  RegressionCore(const MatrixXd& x, const FitSpec& spec, double b0_init);

  const NormalFactor& intercept() const { return b0_; }
  const CoefficientFactor& coefficients() const { return b_; }
  const ShrinkageFactors& prior() const { return prior_; }
  const FitSpec& spec() const { return spec_; }

  /// Cached X^T X and X^T 1; computed on first use so stochastic fits never
  /// touch all N rows.
  const MatrixXd& gram();
  const VectorXd& column_sums();

  // Exact coordinate updates (full data).
  void update_intercept_exact(double sum_t, double c);
  void update_coefficients_exact(const VectorXd& xt_t, double c);

  // Natural-gradient updates from a minibatch scaled by n_total / S.
  void update_intercept_stochastic(const MatrixXd& xb, const VectorXd& tb, double c,
                                   Index n_total, double rho);
  void update_coefficients_stochastic(const MatrixXd& xb, const VectorXd& tb, double c,
                                      double scale, double rho);

  void update_prior(double rho);

  /// E||t - b0 - X b||^2 over the full data using the cached gram matrix.
  double expected_sq_residual_full(const VectorXd& t);
  /// Same quantity restricted to the rows of a minibatch (unscaled).
  double expected_sq_residual(const MatrixXd& xb, const VectorXd& tb) const;

  /// E[b0] + x^T E[b] and Var(b0 + x^T b) per row.
  VectorXd predictor_mean(const MatrixXd& x) const;
  VectorXd predictor_variance(const MatrixXd& x) const;

  /// Intercept prior and entropy, coefficient entropy, and all prior-side
  /// terms.
  double elbo_parameter_terms() const;

  /// Natural parameters of q(b) (correlated family).
  GaussianNatural coefficient_natural() const;

  /// Copy the coefficient, intercept and prior factors into a result.
  void export_to(VariationalFit& fit) const;

 private:
  void set_correlated(VectorXd mu, MatrixXd sigma, double log_det);

  const MatrixXd* x_;
  FitSpec spec_;
  NormalFactor b0_;
  CoefficientFactor b_;
  double log_det_sigma_ = 0.0;
  ShrinkageFactors prior_;
  std::optional<MatrixXd> gram_;
  std::optional<VectorXd> column_sums_;
};

}  // namespace shrinkvb::detail

#pragma once

#include "shrinkvb/factors.hpp"
#include "shrinkvb/types.hpp"

#include <optional>
#include <vector>

namespace shrinkvb {

/// Optimal factor of the coefficient vector: a joint Gaussian (correlated
/// family) or a product of univariate Gaussians (independent family).
struct CoefficientFactor {
  CoeffFamily family = CoeffFamily::correlated;
  VectorXd mu;
  MatrixXd sigma;  // correlated family only
  VectorXd var;    // independent family only

  Index size() const { return mu.size(); }
  VectorXd marginal_var() const;
  /// E[b_p^2].
  VectorXd second_moment() const { return mu.cwiseAbs2() + marginal_var(); }
  /// x^T Cov(b) x for each row of `x`.
  VectorXd quadratic_form_rows(const MatrixXd& x) const;
  double log_det_cov() const;
};

/// Result of a CAVI or SVI fit: the optimal factor of every parameter plus
/// the ELBO trace. Field names follow the nested result layout b0, b, tau,
/// lambda, elbo.
struct VariationalFit {
  Link link = Link::normal;
  Prior prior = Prior::ridge;
  Algorithm algorithm = Algorithm::cavi;

  NormalFactor b0;
  CoefficientFactor b;
  std::optional<GammaFactor> tau;  // normal link, learned error precision
  std::optional<double> tau_fixed;
  std::optional<GammaFactor> lambda;
  std::optional<double> lambda_fixed;

  std::vector<InverseGaussianFactor> lasso_scales;  // local precisions gamma_p
  std::vector<InverseGammaFactor> hs_local_scales;  // lambda_p^2
  std::vector<InverseGammaFactor> hs_nu;            // nu_p
  std::optional<InverseGammaFactor> hs_xi;

  std::vector<double> elbo;
  bool converged = false;
  long iterations = 0;

  CoeffFamily family() const { return b.family; }
  Index num_coefficients() const { return b.size(); }
  double expected_tau() const;
};

/// Post-burn-in Gibbs draws, one row per retained iteration.
struct GibbsDraws {
  Link link = Link::normal;
  Prior prior = Prior::ridge;
  VectorXd b0;
  MatrixXd b;
  VectorXd tau;     // empty for probit
  VectorXd lambda;
  MatrixXd local_scales;  // gamma_p (lasso) or lambda_p^2 (horseshoe); 0 columns for ridge
  long n_iter = 0;
  long burn_in = 0;

  Index kept() const { return b0.size(); }
  Index num_coefficients() const { return b.cols(); }
};

}  // namespace shrinkvb

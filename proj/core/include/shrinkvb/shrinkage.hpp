#pragma once

// Coefficient priors shared by the linear and probit models. Every prior is
// written as b_p ~ N(0, 1 / (lambda * w_p)):
//
//   ridge      w_p = 1,            lambda ~ Gamma(a_lambda, b_lambda)
//   lasso      w_p = gamma_p,      1/gamma_p ~ Exp(1/2), lambda ~ Gamma(a_lambda, b_lambda)
//              (b_p | lambda is double-exponential with scale 1/sqrt(lambda))
//   horseshoe  w_p = 1/lambda_p^2, lambda_p^2 ~ IG(1/2, 1/nu_p), nu_p ~ IG(1/2, 1),
//              1/lambda ~ IG(1/2, 1/xi), xi ~ IG(1/2, 1)
//
// The horseshoe auxiliaries are carried as precisions (w_p, eta_p = 1/nu_p,
// lambda, kappa = 1/xi) so every full conditional is a Gamma.

#include "shrinkvb/dists.hpp"
#include "shrinkvb/factors.hpp"
#include "shrinkvb/types.hpp"

#include <optional>
#include <vector>

namespace shrinkvb {

class ShrinkageFactors {
 public:
  ShrinkageFactors(Prior prior, const PriorHyper& hyper, Index p);

  Prior prior() const { return prior_; }
  Index size() const { return p_; }
  bool lambda_fixed() const { return fixed_lambda_.has_value(); }

  double expected_lambda() const;
  double expected_log_lambda() const;
  /// E[w_p]; all ones for ridge.
  VectorXd expected_weights() const;
  /// E[lambda] * E[w_p], the prior precision seen by the coefficient update.
  VectorXd expected_prior_precision() const;

  /// Local-scale factors given E[b_p^2]. rho = 1 is the exact coordinate
  /// ascent update; smaller rho blends in natural coordinates.
  void update_locals(const VectorXd& b_second_moment, double rho);
  /// Global precision (and the horseshoe's global auxiliary).
  void update_global(const VectorXd& b_second_moment, double rho);

  /// E[log p(b | lambda, w)] + E[log p(w, lambda, aux)] + entropy of the
  /// prior-side factors.
  double elbo(const VectorXd& b_second_moment) const;

  std::optional<GammaFactor> lambda_factor() const;
  std::optional<double> fixed_lambda() const { return fixed_lambda_; }
  const std::vector<InverseGaussianFactor>& lasso_locals() const { return lasso_locals_; }
  const std::vector<GammaFactor>& hs_locals() const { return hs_locals_; }
  const std::vector<GammaFactor>& hs_local_aux() const { return hs_local_aux_; }
  const GammaFactor& hs_global_aux() const { return hs_global_aux_; }

 private:
  Prior prior_;
  PriorHyper hyper_;
  Index p_;
  std::optional<double> fixed_lambda_;
  GammaFactor lambda_;
  std::vector<InverseGaussianFactor> lasso_locals_;
  std::vector<GammaFactor> hs_locals_;
  std::vector<GammaFactor> hs_local_aux_;
  GammaFactor hs_global_aux_;
};

/// Gibbs state for the same hierarchy.
class ShrinkageSampler {
 public:
  ShrinkageSampler(Prior prior, const PriorHyper& hyper, Index p);

  double lambda() const { return lambda_; }
  const VectorXd& weights() const { return weights_; }
  /// lambda * w_p.
  VectorXd prior_precision() const { return lambda_ * weights_; }
  /// Per-coefficient local scale in reporting units: gamma_p for the LASSO,
  /// lambda_p^2 for the horseshoe. Empty for ridge.
  VectorXd local_scales() const;

  void sample_locals(const VectorXd& b, Rng& rng);
  void sample_global(const VectorXd& b, Rng& rng);

 private:
  Prior prior_;
  PriorHyper hyper_;
  bool lambda_fixed_;
  double lambda_;
  VectorXd weights_;
  VectorXd local_aux_;
  double global_aux_ = 1.0;
};

}  // namespace shrinkvb

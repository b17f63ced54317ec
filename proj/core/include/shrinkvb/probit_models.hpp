#pragma once

// Probit regression through latent-variable augmentation:
//
//   y_n = 1(z_n > 0),  z_n ~ N(b0 + x_n^T b, 1),  b0 ~ N(0, var_b0)
//
// with the same shrinkage priors on b as the normal linear model. Given b,
// each z_n is a unit-variance normal truncated to the side matching y_n.

#include "shrinkvb/engine.hpp"
#include "shrinkvb/expfam.hpp"
#include "shrinkvb/fit.hpp"
#include "shrinkvb/regression_core.hpp"
#include "shrinkvb/types.hpp"

#include <cstdint>
#include <span>

namespace shrinkvb {

struct BinaryData {
  MatrixXd X;
  VectorXd y;  // entries exactly 0 or 1

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
  void validate() const;
};

/// Per-observation latent factors q(z_n) = N(location_n, 1) truncated to the
/// side of y_n; `z_mean` holds E[z_n].
struct LatentState {
  VectorXd location;
  VectorXd z_mean;
};

LatentState update_latents(const BinaryData& data, const VectorXd& coeff_mean, double b0_mean);

/// E_q[natural parameters of b | X, z, lambda] minus `current`. The data
/// block is sum_n (E[z_n] - b0_mean) x_n; the precision block is
/// -1/2 (X^T X + E[lambda] I).
GaussianNatural natural_gradient_b(const BinaryData& data, const LatentState& latents,
                                   double e_lambda, const GaussianNatural& current,
                                   double b0_mean = 0.0);

/// Minibatch estimate of the full-data target, with the data sums scaled by
/// n_total / S and the prior precision added once.
GaussianNatural svi_target_b(const MatrixXd& x_batch, const VectorXd& z_mean_batch,
                             double b0_mean, const VectorXd& prior_precision, Index n_total);

/// Blend `current` toward the minibatch target with step `rho` (ridge prior:
/// prior precision e_lambda on every coefficient).
GaussianNatural svi_step_b(const MatrixXd& x_batch, const VectorXd& z_mean_batch,
                           double e_lambda, const GaussianNatural& current, double rho,
                           Index n_total, double b0_mean = 0.0);

/// Mean-field state of the probit model. A CAVI sweep updates q(z), q(b0),
/// q(b), the local scales and q(lambda) in that order.
class ProbitVariational {
 public:
  ProbitVariational(const BinaryData& data, const FitSpec& spec);

  void cavi_sweep();
  double stochastic_step(std::span<const Index> batch, double rho);
  double elbo();

  const detail::RegressionCore& core() const { return core_; }
  const LatentState& latents();
  GaussianNatural coefficient_natural() const { return core_.coefficient_natural(); }

  VariationalFit result() const;

 private:
  double latent_terms(const MatrixXd& x, const VectorXd& y, const LatentState& latents) const;
  void refresh_latents();

  const BinaryData* data_;
  FitSpec spec_;
  detail::RegressionCore core_;
  LatentState latents_;
  bool latents_ready_ = false;
};

GibbsDraws fit_probit_gibbs(const BinaryData& data, const FitSpec& spec, long n_iter,
                            long burn_in, std::uint64_t seed);

VariationalFit fit_probit_cavi(const BinaryData& data, const FitSpec& spec, long n_iter,
                               double rel_tol);

VariationalFit fit_probit_svi(const BinaryData& data, const FitSpec& spec, long n_iter,
                              Index batch_size,
                              const StepSchedule& schedule = StepSchedule::constant(),
                              std::uint64_t seed = 0);

}  // namespace shrinkvb

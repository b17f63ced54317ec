#pragma once

// Normal linear regression y = b0 + X b + e, e ~ N(0, 1/tau), with ridge,
// LASSO or horseshoe shrinkage on b.
//
//   b0  ~ N(0, var_b0)
//   tau ~ Gamma(a_tau, b_tau)
//   b   ~ shrinkage prior (see shrinkage.hpp)

#include "shrinkvb/engine.hpp"
#include "shrinkvb/fit.hpp"
#include "shrinkvb/regression_core.hpp"
#include "shrinkvb/types.hpp"

#include <cstdint>
#include <span>

namespace shrinkvb {

struct RegressionData {
  MatrixXd X;
  VectorXd y;

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
  void validate() const;
};

/// Mean-field state of the normal linear model. One call to `cavi_sweep`
/// updates q(b0), q(b), the local scales, q(lambda) and q(tau) in that order.
class LmVariational {
 public:
  LmVariational(const RegressionData& data, const FitSpec& spec);

  void cavi_sweep();
  /// One natural-gradient step on a minibatch; returns the ELBO estimate
  /// with the likelihood scaled to full-data units.
  double stochastic_step(std::span<const Index> batch, double rho);

  double elbo();

  const detail::RegressionCore& core() const { return core_; }
  double expected_tau() const;
  std::optional<GammaFactor> tau_factor() const;
  GaussianNatural coefficient_natural() const { return core_.coefficient_natural(); }

  VariationalFit result() const;

 private:
  double elbo_with_residual(double expected_sq_residual) const;
  void update_tau(double expected_sq_residual, double rho);

  const RegressionData* data_;
  FitSpec spec_;
  detail::RegressionCore core_;
  GammaFactor tau_;
};

GibbsDraws fit_lm_gibbs(const RegressionData& data, const FitSpec& spec, long n_iter,
                        long burn_in, std::uint64_t seed);

VariationalFit fit_lm_cavi(const RegressionData& data, const FitSpec& spec, long n_iter,
                           double rel_tol);

VariationalFit fit_lm_svi(const RegressionData& data, const FitSpec& spec, long n_iter,
                          Index batch_size,
                          const StepSchedule& schedule = StepSchedule::constant(),
                          std::uint64_t seed = 0);

/// ELBO of the current state over the full data.
double lm_elbo(LmVariational& state);

}  // namespace shrinkvb

#pragma once

// Optimal-factor records returned by the variational fits. Each knows the
// expectations and entropy the ELBO needs.

namespace shrinkvb {

struct NormalFactor {
  double mean = 0.0;
  double var = 1.0;

  double second_moment() const { return mean * mean + var; }
  double entropy() const;
};

struct GammaFactor {
  double shape = 1.0;
  double rate = 1.0;

  double mean() const;
  double mean_log() const;
  double entropy() const;
  /// E[log Gamma(x; a, b)] for fixed hyperparameters a, b.
  double expected_log_prior(double a, double b) const;
};

/// Inverse-Gaussian(mean, shape): the optimal factor of a LASSO local
/// precision.
struct InverseGaussianFactor {
  double mean = 1.0;
  double shape = 1.0;

  double mean_reciprocal() const { return 1.0 / mean + 1.0 / shape; }
  double mean_log() const;
  double entropy() const;
};

/// Inverse-Gamma(shape, scale), used to report horseshoe variance factors.
struct InverseGammaFactor {
  double shape = 1.0;
  double scale = 1.0;
};

}  // namespace shrinkvb

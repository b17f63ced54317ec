#pragma once

// Natural-parameter forms of the Gaussian and Gamma families. Stochastic
// variational updates are convex combinations in these coordinates.
//
// Gaussian convention: with sufficient statistics (b, b b^T) the natural
// parameters are eta1 = Sigma^{-1} mu and eta2 = -1/2 Sigma^{-1}.
// Gamma convention: with sufficient statistics (log x, x) the natural
// parameters are (shape - 1, -rate).

#include "shrinkvb/types.hpp"

#include <Eigen/Cholesky>

namespace shrinkvb {

struct GaussianMoment {
  VectorXd mu;
  MatrixXd sigma;
};

struct GaussianNatural {
  VectorXd eta1;
  MatrixXd eta2;
};

struct GammaNatural {
  double shape_minus_one = 0.0;
  double neg_rate = -1.0;

  static GammaNatural from_shape_rate(double shape, double rate);
  double shape() const { return shape_minus_one + 1.0; }
  double rate() const { return -neg_rate; }
  bool valid() const { return shape_minus_one + 1.0 > 0.0 && neg_rate < 0.0; }
};

/// Cholesky factor of a symmetric positive-definite matrix. Throws
/// DomainError when the matrix is not numerically positive definite: any
/// factor diagonal below 1e-12 times the largest one counts as singular.
Eigen::LLT<MatrixXd> spd_factor(const MatrixXd& m);

/// Inverse of a symmetric positive-definite matrix from its factor.
MatrixXd spd_inverse(const Eigen::LLT<MatrixXd>& factor);

/// log det of the factored matrix.
double spd_log_det(const Eigen::LLT<MatrixXd>& factor);

GaussianNatural gaussian_to_natural(const GaussianMoment& m);
GaussianMoment gaussian_from_natural(const GaussianNatural& n);

/// (1 - rho) * old + rho * target in each natural coordinate.
GaussianNatural blend_natural(const GaussianNatural& old, const GaussianNatural& target,
                              double rho);
GammaNatural blend_gamma(const GammaNatural& old, const GammaNatural& target, double rho);

/// Same step rule for a single natural coordinate; shared by the scalar
/// factors (intercept, independent coefficients, LASSO local scales).
double blend_scalar(double old, double target, double rho);

}  // namespace shrinkvb

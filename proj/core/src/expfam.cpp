#include "shrinkvb/expfam.hpp"

#include "shrinkvb/errors.hpp"

#include <cmath>
#include <string>

namespace shrinkvb {

namespace {

constexpr double kSingularRatio = 1e-12;

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("step size must lie in (0, 1], got " + std::to_string(rho));
  }
}

void check_symmetric(const MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DomainError(std::string(what) + " must be square");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300)) {
    throw DomainError(std::string(what) + " must be symmetric");
  }
}

}  // namespace

GammaNatural GammaNatural::from_shape_rate(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw DomainError("gamma shape and rate must be positive");
  }
  return {shape - 1.0, -rate};
}

Eigen::LLT<MatrixXd> spd_factor(const MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError("spd_factor: matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw DomainError("spd_factor: matrix has non-finite entries");
  }
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DomainError("spd_factor: matrix is not positive definite");
  }
  const VectorXd diag = llt.matrixLLT().diagonal();
  if (diag.minCoeff() < kSingularRatio * diag.maxCoeff()) {
    throw DomainError("spd_factor: matrix is numerically singular");
  }
  return llt;
}

MatrixXd spd_inverse(const Eigen::LLT<MatrixXd>& factor) {
  const Index n = factor.matrixLLT().rows();
  MatrixXd inv = factor.solve(MatrixXd::Identity(n, n));
  return 0.5 * (inv + inv.transpose());
}

double spd_log_det(const Eigen::LLT<MatrixXd>& factor) {
  return 2.0 * factor.matrixLLT().diagonal().array().log().sum();
}

GaussianNatural gaussian_to_natural(const GaussianMoment& m) {
  if (m.mu.size() != m.sigma.rows()) {
    throw DomainError("gaussian_to_natural: mu and sigma dimensions differ");
  }
  check_symmetric(m.sigma, "sigma");
  const auto llt = spd_factor(m.sigma);
  GaussianNatural n;
  n.eta1 = llt.solve(m.mu);
  n.eta2 = -0.5 * spd_inverse(llt);
  return n;
}

GaussianMoment gaussian_from_natural(const GaussianNatural& n) {
  if (n.eta1.size() != n.eta2.rows()) {
    throw DomainError("gaussian_from_natural: eta1 and eta2 dimensions differ");
  }
  check_symmetric(n.eta2, "eta2");
  const auto llt = spd_factor(-2.0 * n.eta2);
  GaussianMoment m;
  m.sigma = spd_inverse(llt);
  m.mu = llt.solve(n.eta1);
  return m;
}

GaussianNatural blend_natural(const GaussianNatural& old, const GaussianNatural& target,
                              double rho) {
  check_rho(rho);
  if (old.eta1.size() != target.eta1.size() || old.eta2.rows() != target.eta2.rows() ||
      old.eta2.cols() != target.eta2.cols() || old.eta1.size() != old.eta2.rows()) {
    throw DomainError("blend_natural: dimension mismatch");
  }
  GaussianNatural out;
  out.eta1 = (1.0 - rho) * old.eta1 + rho * target.eta1;
  out.eta2 = (1.0 - rho) * old.eta2 + rho * target.eta2;
  return out;
}

GammaNatural blend_gamma(const GammaNatural& old, const GammaNatural& target, double rho) {
  check_rho(rho);
  return {(1.0 - rho) * old.shape_minus_one + rho * target.shape_minus_one,
          (1.0 - rho) * old.neg_rate + rho * target.neg_rate};
}

double blend_scalar(double old, double target, double rho) {
  check_rho(rho);
  return (1.0 - rho) * old + rho * target;
}

}  // namespace shrinkvb

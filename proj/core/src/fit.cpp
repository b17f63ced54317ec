#include "shrinkvb/fit.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/expfam.hpp"

#include <cmath>

namespace shrinkvb {

VectorXd CoefficientFactor::marginal_var() const {
  if (family == CoeffFamily::correlated) return sigma.diagonal();
  return var;
}

VectorXd CoefficientFactor::quadratic_form_rows(const MatrixXd& x) const {
  if (x.cols() != size()) {
    throw DomainError("quadratic form: expected " + std::to_string(size()) + " columns, got " +
                      std::to_string(x.cols()));
  }
  if (family == CoeffFamily::correlated) {
    return (x * sigma).cwiseProduct(x).rowwise().sum();
  }
  return x.cwiseAbs2() * var;
}

double CoefficientFactor::log_det_cov() const {
  if (family == CoeffFamily::correlated) return spd_log_det(spd_factor(sigma));
  return var.array().log().sum();
}

double VariationalFit::expected_tau() const {
  if (tau_fixed) return *tau_fixed;
  if (tau) return tau->mean();
  return 1.0;
}

}  // namespace shrinkvb

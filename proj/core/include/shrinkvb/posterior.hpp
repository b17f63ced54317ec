#pragma once

#include "shrinkvb/fit.hpp"
#include "shrinkvb/types.hpp"

#include <string>
#include <vector>

namespace shrinkvb {

struct SummaryRow {
  std::string name;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Intercept first, then one row per coefficient.
struct SummaryTable {
  std::vector<SummaryRow> rows;
  double level = 0.95;
};

struct PredictionSet {
  VectorXd estimate;
  VectorXd ci_lower;
  VectorXd ci_upper;
};

/// "b1", "b2", ... used when no coefficient names are supplied.
std::vector<std::string> default_coefficient_names(Index p);

/// Equal-tailed credible intervals from the Gaussian marginals of the
/// variational factors (diagonal of sigma_mat for the correlated family).
SummaryTable summarize_vi(const VariationalFit& fit, double level,
                          const std::vector<std::string>& names = {});

/// Draw means and empirical equal-tailed quantiles.
SummaryTable summarize_gibbs(const GibbsDraws& draws, double level,
                             const std::vector<std::string>& names = {});

/// Linear-interpolation sample quantile (the default rule of most statistics
/// packages): position (n - 1) * prob in the sorted sample.
double empirical_quantile(std::vector<double> sample, double prob);

/// Predictive intervals for new responses: the coefficient uncertainty plus
/// observation noise E[sigma^2] (rate / (shape - 1) of q(tau) when shape > 1,
/// otherwise 1 / E[tau]).
PredictionSet predict_lm(const VariationalFit& fit, const MatrixXd& x_new, double level);
PredictionSet predict_lm(const GibbsDraws& draws, const MatrixXd& x_new, double level);

/// P(y = 1 | x) integrated over q(b0, b): Phi(m / sqrt(1 + v)).
VectorXd predict_probit(const VariationalFit& fit, const MatrixXd& x_new);
VectorXd predict_probit(const GibbsDraws& draws, const MatrixXd& x_new);

}  // namespace shrinkvb

#include "shrinkvb/posterior.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shrinkvb {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("level must lie in (0, 1), got " + std::to_string(level));
  }
}

std::vector<std::string> resolve_names(const std::vector<std::string>& names, Index p) {
  if (names.empty()) return default_coefficient_names(p);
  if (static_cast<Index>(names.size()) != p) {
    throw DomainError("expected " + std::to_string(p) + " coefficient names, got " +
                      std::to_string(names.size()));
  }
  return names;
}

void check_columns(const MatrixXd& x, Index p) {
  if (x.cols() != p) {
    throw DomainError("new data must have " + std::to_string(p) + " columns, got " +
                      std::to_string(x.cols()));
  }
}

SummaryRow gaussian_row(std::string name, double mean, double var, double z) {
  const double half = z * std::sqrt(std::max(var, 0.0));
  return {std::move(name), mean, mean - half, mean + half};
}

SummaryRow empirical_row(std::string name, const VectorXd& draws, double level) {
  std::vector<double> sample(draws.data(), draws.data() + draws.size());
  const double tail = 0.5 * (1.0 - level);
  return {std::move(name), draws.mean(), empirical_quantile(sample, tail),
          empirical_quantile(sample, 1.0 - tail)};
}

double clamp_probability(double p) {
  constexpr double kLow = std::numeric_limits<double>::min();
  const double high = std::nextafter(1.0, 0.0);
  return std::clamp(p, kLow, high);
}

}  // namespace

std::vector<std::string> default_coefficient_names(Index p) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) out.push_back("b" + std::to_string(j + 1));
  return out;
}

double empirical_quantile(std::vector<double> sample, double prob) {
  if (sample.empty()) throw DomainError("empirical_quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile probability outside [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double h = static_cast<double>(sample.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

SummaryTable summarize_vi(const VariationalFit& fit, double level,
                          const std::vector<std::string>& names) {
  check_level(level);
  const auto labels = resolve_names(names, fit.num_coefficients());
  const double z = special::norm_quantile(0.5 + 0.5 * level);
  SummaryTable table;
  table.level = level;
  table.rows.push_back(gaussian_row("Intercept", fit.b0.mean, fit.b0.var, z));
  const VectorXd var = fit.b.marginal_var();
  for (Index j = 0; j < fit.num_coefficients(); ++j) {
    table.rows.push_back(gaussian_row(labels[static_cast<std::size_t>(j)], fit.b.mu[j], var[j], z));
  }
  return table;
}

SummaryTable summarize_gibbs(const GibbsDraws& draws, double level,
                             const std::vector<std::string>& names) {
  check_level(level);
  if (draws.kept() < 2) throw DomainError("summarize_gibbs needs at least two retained draws");
  const auto labels = resolve_names(names, draws.num_coefficients());
  SummaryTable table;
  table.level = level;
  table.rows.push_back(empirical_row("Intercept", draws.b0, level));
  for (Index j = 0; j < draws.num_coefficients(); ++j) {
    table.rows.push_back(empirical_row(labels[static_cast<std::size_t>(j)], draws.b.col(j), level));
  }
  return table;
}

PredictionSet predict_lm(const VariationalFit& fit, const MatrixXd& x_new, double level) {
  check_level(level);
  check_columns(x_new, fit.num_coefficients());
  double noise;
  if (fit.tau_fixed) {
    noise = 1.0 / *fit.tau_fixed;
  } else if (fit.tau && fit.tau->shape > 1.0) {
    noise = fit.tau->rate / (fit.tau->shape - 1.0);
  } else {
    noise = 1.0 / fit.expected_tau();
  }
  const double z = special::norm_quantile(0.5 + 0.5 * level);
  PredictionSet out;
  out.estimate = (x_new * fit.b.mu).array() + fit.b0.mean;
  const VectorXd sd =
      ((fit.b.quadratic_form_rows(x_new).array() + fit.b0.var + noise).sqrt()).matrix();
  out.ci_lower = out.estimate - z * sd;
  out.ci_upper = out.estimate + z * sd;
  return out;
}

PredictionSet predict_lm(const GibbsDraws& draws, const MatrixXd& x_new, double level) {
  check_level(level);
  check_columns(x_new, draws.num_coefficients());
  if (draws.kept() < 2 || draws.tau.size() != draws.kept()) {
    throw DomainError("predict_lm needs normal-link draws with at least two iterations");
  }
  // rows: new observations, columns: retained iterations
  const MatrixXd linear = (x_new * draws.b.transpose()).rowwise() + draws.b0.transpose();
  const double noise = draws.tau.cwiseInverse().mean();
  const double z = special::norm_quantile(0.5 + 0.5 * level);
  const double k = static_cast<double>(draws.kept());
  PredictionSet out;
  out.estimate = linear.rowwise().mean();
  const VectorXd spread =
      (linear.colwise() - out.estimate).cwiseAbs2().rowwise().sum() / (k - 1.0);
  const VectorXd sd = (spread.array() + noise).sqrt();
  out.ci_lower = out.estimate - z * sd;
  out.ci_upper = out.estimate + z * sd;
  return out;
}

VectorXd predict_probit(const VariationalFit& fit, const MatrixXd& x_new) {
  check_columns(x_new, fit.num_coefficients());
  const VectorXd m = (x_new * fit.b.mu).array() + fit.b0.mean;
  const VectorXd v = fit.b.quadratic_form_rows(x_new).array() + fit.b0.var;
  VectorXd out(m.size());
  for (Index i = 0; i < m.size(); ++i) {
    out[i] = clamp_probability(special::norm_cdf(m[i] / std::sqrt(1.0 + v[i])));
  }
  return out;
}

VectorXd predict_probit(const GibbsDraws& draws, const MatrixXd& x_new) {
  check_columns(x_new, draws.num_coefficients());
  if (draws.kept() < 1) throw DomainError("predict_probit needs retained draws");
  const MatrixXd linear = (x_new * draws.b.transpose()).rowwise() + draws.b0.transpose();
  VectorXd out(x_new.rows());
  for (Index i = 0; i < x_new.rows(); ++i) {
    double sum = 0.0;
    for (Index k = 0; k < linear.cols(); ++k) sum += special::norm_cdf(linear(i, k));
    out[i] = clamp_probability(sum / static_cast<double>(linear.cols()));
  }
  return out;
}

}  // namespace shrinkvb

#include "shrinkvb/lm_models.hpp"

#include "shrinkvb/dists.hpp"
#include "shrinkvb/errors.hpp"
#include "shrinkvb/expfam.hpp"
#include "shrinkvb/shrinkage.hpp"
#include "shrinkvb/special.hpp"

#include <cmath>
#include <string>

namespace shrinkvb {

namespace {

MatrixXd gather_rows(const MatrixXd& x, std::span<const Index> rows) {
  MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

VectorXd gather(const VectorXd& v, std::span<const Index> rows) {
  VectorXd out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = v[rows[i]];
  return out;
}

}  // namespace

void RegressionData::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw DomainError("data must have N >= 1 and P >= 1");
  if (X.rows() != y.size()) {
    throw DomainError("X has " + std::to_string(X.rows()) + " rows but y has " +
                      std::to_string(y.size()) + " entries");
  }
  if (!X.allFinite() || !y.allFinite()) throw DomainError("data contain non-finite values");
}

LmVariational::LmVariational(const RegressionData& data, const FitSpec& spec)
    : data_(&data),
      spec_(spec),
      core_((data.validate(), data.X), spec, data.y.mean()),
      tau_{spec.hyper.a_tau, spec.hyper.b_tau} {}

double LmVariational::expected_tau() const {
  return spec_.hyper.fixed_tau ? *spec_.hyper.fixed_tau : tau_.mean();
}

std::optional<GammaFactor> LmVariational::tau_factor() const {
  if (spec_.hyper.fixed_tau) return std::nullopt;
  return tau_;
}

void LmVariational::update_tau(double expected_sq_residual, double rho) {
  if (spec_.hyper.fixed_tau) return;
  const double shape = spec_.hyper.a_tau + 0.5 * static_cast<double>(data_->n());
  const double rate = spec_.hyper.b_tau + 0.5 * expected_sq_residual;
  if (rho == 1.0) {
    tau_ = {shape, rate};
    return;
  }
  const auto mixed = blend_gamma(GammaNatural::from_shape_rate(tau_.shape, tau_.rate),
                                 GammaNatural::from_shape_rate(shape, rate), rho);
  tau_ = {mixed.shape(), mixed.rate()};
}

void LmVariational::cavi_sweep() {
  const double c = expected_tau();
  core_.update_intercept_exact(data_->y.sum(), c);
  core_.update_coefficients_exact(data_->X.transpose() * data_->y, c);
  core_.update_prior(1.0);
  update_tau(core_.expected_sq_residual_full(data_->y), 1.0);
}

double LmVariational::stochastic_step(std::span<const Index> batch, double rho) {
  if (batch.empty()) throw DomainError("minibatch must be non-empty");
  const MatrixXd xb = gather_rows(data_->X, batch);
  const VectorXd yb = gather(data_->y, batch);
  const Index n = data_->n();
  const double scale = static_cast<double>(n) / static_cast<double>(batch.size());

  core_.update_intercept_stochastic(xb, yb, expected_tau(), n, rho);
  core_.update_coefficients_stochastic(xb, yb, expected_tau(), scale, rho);
  core_.update_prior(rho);
  const double scaled_residual = scale * core_.expected_sq_residual(xb, yb);
  update_tau(scaled_residual, rho);
  return elbo_with_residual(scaled_residual);
}

double LmVariational::elbo_with_residual(double expected_sq_residual) const {
  const double n = static_cast<double>(data_->n());
  const double e_tau = expected_tau();
  const double e_log_tau =
      spec_.hyper.fixed_tau ? std::log(*spec_.hyper.fixed_tau) : tau_.mean_log();
  double total = 0.5 * n * (e_log_tau - special::kLog2Pi) - 0.5 * e_tau * expected_sq_residual;
  total += core_.elbo_parameter_terms();
  if (!spec_.hyper.fixed_tau) {
    total += tau_.expected_log_prior(spec_.hyper.a_tau, spec_.hyper.b_tau) + tau_.entropy();
  }
  return total;
}

double LmVariational::elbo() { return elbo_with_residual(core_.expected_sq_residual_full(data_->y)); }

VariationalFit LmVariational::result() const {
  VariationalFit fit;
  core_.export_to(fit);
  fit.link = Link::normal;
  fit.tau = tau_factor();
  fit.tau_fixed = spec_.hyper.fixed_tau;
  return fit;
}

double lm_elbo(LmVariational& state) { return state.elbo(); }

VariationalFit fit_lm_cavi(const RegressionData& data, const FitSpec& spec, long n_iter,
                           double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (n_iter < 1) throw DomainError("n_iter must be >= 1");
  LmVariational state(data, spec);
  ElboTrace trace;
  long iter = 0;
  while (iter < n_iter) {
    ++iter;
    state.cavi_sweep();
    const double value = state.elbo();
    if (!std::isfinite(value)) {
      throw NumericalError("non-finite ELBO at iteration " + std::to_string(iter));
    }
    trace.values.push_back(value);
    if (check_converged(trace, rel_tol)) {
      trace.converged_at = iter;
      break;
    }
  }
  VariationalFit fit = state.result();
  fit.algorithm = Algorithm::cavi;
  fit.elbo = std::move(trace.values);
  fit.converged = trace.converged_at.has_value();
  fit.iterations = iter;
  return fit;
}

VariationalFit fit_lm_svi(const RegressionData& data, const FitSpec& spec, long n_iter,
                          Index batch_size, const StepSchedule& schedule, std::uint64_t seed) {
  if (n_iter < 1) throw DomainError("n_iter must be >= 1");
  if (batch_size < 1 || batch_size > data.n()) {
    throw DomainError("batch_size must satisfy 1 <= batch_size <= N");
  }
  LmVariational state(data, spec);
  Rng rng(seed);
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(n_iter));
  for (long t = 1; t <= n_iter; ++t) {
    const auto batch = minibatch_indices(data.n(), batch_size, rng);
    const double value = state.stochastic_step(batch, step_size(schedule, t));
    if (!std::isfinite(value)) {
      throw NumericalError("non-finite ELBO estimate at iteration " + std::to_string(t));
    }
    trace.push_back(value);
  }
  VariationalFit fit = state.result();
  fit.algorithm = Algorithm::svi;
  fit.elbo = std::move(trace);
  fit.converged = false;
  fit.iterations = n_iter;
  return fit;
}

GibbsDraws fit_lm_gibbs(const RegressionData& data, const FitSpec& spec, long n_iter,
                        long burn_in, std::uint64_t seed) {
  data.validate();
  spec.hyper.validate();
  if (burn_in < 0 || burn_in >= n_iter) {
    throw DomainError("burn_in must satisfy 0 <= burn_in < n_iter");
  }
  const Index n = data.n();
  const Index p = data.p();
  const auto& hyper = spec.hyper;
  Rng rng(seed);

  MatrixXd gram = MatrixXd::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  const VectorXd col_sums = data.X.colwise().sum().transpose();
  const VectorXd xty = data.X.transpose() * data.y;
  const double sum_y = data.y.sum();

  ShrinkageSampler prior(spec.prior, hyper, p);
  double b0 = data.y.mean();
  VectorXd b = VectorXd::Zero(p);
  double tau = hyper.fixed_tau.value_or(1.0);

  GibbsDraws draws;
  draws.link = Link::normal;
  draws.prior = spec.prior;
  draws.n_iter = n_iter;
  draws.burn_in = burn_in;
  const Index kept = n_iter - burn_in;
  draws.b0.resize(kept);
  draws.b.resize(kept, p);
  draws.tau.resize(kept);
  draws.lambda.resize(kept);
  draws.local_scales.resize(kept, spec.prior == Prior::ridge ? 0 : p);

  VectorXd eps(p);
  for (long iter = 1; iter <= n_iter; ++iter) {
    const double b0_precision = tau * static_cast<double>(n) + 1.0 / hyper.var_b0;
    b0 = tau * (sum_y - col_sums.dot(b)) / b0_precision +
         sample_normal(rng) / std::sqrt(b0_precision);

    MatrixXd precision = tau * gram;
    precision.diagonal() += prior.prior_precision();
    Eigen::LLT<MatrixXd> llt(precision);
    const VectorXd diag = llt.matrixLLT().diagonal();
    if (llt.info() != Eigen::Success || !(diag.minCoeff() >= 1e-12 * diag.maxCoeff())) {
      throw NumericalError("singular coefficient precision at Gibbs iteration " +
                           std::to_string(iter));
    }
    for (Index j = 0; j < p; ++j) eps[j] = sample_normal(rng);
    b = llt.solve(tau * (xty - b0 * col_sums)) + llt.matrixU().solve(eps);

    prior.sample_locals(b, rng);
    prior.sample_global(b, rng);

    if (!hyper.fixed_tau) {
      const double sse = (data.y.array() - b0 - (data.X * b).array()).matrix().squaredNorm();
      tau = sample_gamma(hyper.a_tau + 0.5 * static_cast<double>(n), hyper.b_tau + 0.5 * sse,
                         rng);
    }

    if (iter > burn_in) {
      const Index row = iter - burn_in - 1;
      draws.b0[row] = b0;
      draws.b.row(row) = b.transpose();
      draws.tau[row] = tau;
      draws.lambda[row] = prior.lambda();
      if (spec.prior != Prior::ridge) draws.local_scales.row(row) = prior.local_scales().transpose();
    }
  }
  return draws;
}

}  // namespace shrinkvb

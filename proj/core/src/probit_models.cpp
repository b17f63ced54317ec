#include "shrinkvb/probit_models.hpp"

#include "shrinkvb/dists.hpp"
#include "shrinkvb/errors.hpp"
#include "shrinkvb/shrinkage.hpp"
#include "shrinkvb/special.hpp"

#include <cmath>
#include <string>

namespace shrinkvb {

namespace {

TruncSide side_of(double y) { return y > 0.5 ? TruncSide::positive : TruncSide::negative; }

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

LatentState latents_for(const VectorXd& location, const VectorXd& y) {
  LatentState s{location, VectorXd(location.size())};
  for (Index i = 0; i < location.size(); ++i) {
    s.z_mean[i] = trunc_normal_mean(location[i], side_of(y[i]));
  }
  return s;
}

}  // namespace

void BinaryData::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw DomainError("data must have N >= 1 and P >= 1");
  if (X.rows() != y.size()) {
    throw DomainError("X has " + std::to_string(X.rows()) + " rows but y has " +
                      std::to_string(y.size()) + " entries");
  }
  if (!X.allFinite()) throw DomainError("predictors contain non-finite values");
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) {
      throw DomainError("binary response must be 0 or 1; row " + std::to_string(i) + " has " +
                        std::to_string(y[i]));
    }
  }
}

LatentState update_latents(const BinaryData& data, const VectorXd& coeff_mean, double b0_mean) {
  if (coeff_mean.size() != data.p()) throw DomainError("update_latents: dimension mismatch");
  const VectorXd location = (data.X * coeff_mean).array() + b0_mean;
  return latents_for(location, data.y);
}

GaussianNatural natural_gradient_b(const BinaryData& data, const LatentState& latents,
                                   double e_lambda, const GaussianNatural& current,
                                   double b0_mean) {
  const Index p = data.p();
  if (latents.z_mean.size() != data.n() || current.eta1.size() != p ||
      current.eta2.rows() != p || current.eta2.cols() != p) {
    throw DomainError("natural_gradient_b: dimension mismatch");
  }
  const VectorXd centered = latents.z_mean.array() - b0_mean;
  MatrixXd precision = data.X.transpose() * data.X;
  precision.diagonal().array() += e_lambda;
  GaussianNatural grad;
  grad.eta1 = data.X.transpose() * centered - current.eta1;
  grad.eta2 = -0.5 * precision - current.eta2;
  return grad;
}

GaussianNatural svi_target_b(const MatrixXd& x_batch, const VectorXd& z_mean_batch,
                             double b0_mean, const VectorXd& prior_precision, Index n_total) {
  const Index s = x_batch.rows();
  if (s < 1) throw DomainError("minibatch must be non-empty");
  if (s > n_total) throw DomainError("minibatch larger than the data set");
  if (z_mean_batch.size() != s || prior_precision.size() != x_batch.cols()) {
    throw DomainError("svi_target_b: dimension mismatch");
  }
  const double scale = static_cast<double>(n_total) / static_cast<double>(s);
  const VectorXd centered = z_mean_batch.array() - b0_mean;
  MatrixXd precision = scale * (x_batch.transpose() * x_batch);
  precision.diagonal() += prior_precision;
  GaussianNatural target;
  target.eta1 = scale * (x_batch.transpose() * centered);
  target.eta2 = -0.5 * precision;
  return target;
}

GaussianNatural svi_step_b(const MatrixXd& x_batch, const VectorXd& z_mean_batch,
                           double e_lambda, const GaussianNatural& current, double rho,
                           Index n_total, double b0_mean) {
  const VectorXd prior_precision = VectorXd::Constant(x_batch.cols(), e_lambda);
  return blend_natural(current,
                       svi_target_b(x_batch, z_mean_batch, b0_mean, prior_precision, n_total),
                       rho);
}

ProbitVariational::ProbitVariational(const BinaryData& data, const FitSpec& spec)
    : data_(&data), spec_(spec), core_((data.validate(), data.X), spec, 0.0) {}

void ProbitVariational::refresh_latents() {
  latents_ = latents_for(core_.predictor_mean(data_->X), data_->y);
  latents_ready_ = true;
}

const LatentState& ProbitVariational::latents() {
  if (!latents_ready_) refresh_latents();
  return latents_;
}

void ProbitVariational::cavi_sweep() {
  refresh_latents();
  const VectorXd& t = latents_.z_mean;
  core_.update_intercept_exact(t.sum(), 1.0);
  core_.update_coefficients_exact(data_->X.transpose() * t, 1.0);
  core_.update_prior(1.0);
}

double ProbitVariational::latent_terms(const MatrixXd& x, const VectorXd& y,
                                       const LatentState& latents) const {
  // E[log p(y, z | b0, b)] - E[log q(z)] for q(z_n) located at m_n while the
  // current linear predictor has mean eta_n and variance v_n.
  const VectorXd eta = core_.predictor_mean(x);
  const VectorXd v = core_.predictor_variance(x);
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    const double m = latents.location[i];
    const double sign = y[i] > 0.5 ? 1.0 : -1.0;
    const double gap = m - eta[i];
    total += special::log_norm_cdf(sign * m) - (latents.z_mean[i] - m) * gap - 0.5 * gap * gap -
             0.5 * v[i];
  }
  return total;
}

double ProbitVariational::elbo() {
  if (!latents_ready_) refresh_latents();
  return latent_terms(data_->X, data_->y, latents_) + core_.elbo_parameter_terms();
}

double ProbitVariational::stochastic_step(std::span<const Index> batch, double rho) {
  if (batch.empty()) throw DomainError("minibatch must be non-empty");
  const MatrixXd xb = gather_rows(data_->X, batch);
  const VectorXd yb = gather(data_->y, batch);
  const Index n = data_->n();
  const double scale = static_cast<double>(n) / static_cast<double>(batch.size());

  const LatentState local = latents_for(core_.predictor_mean(xb), yb);
  core_.update_intercept_stochastic(xb, local.z_mean, 1.0, n, rho);
  core_.update_coefficients_stochastic(xb, local.z_mean, 1.0, scale, rho);
  core_.update_prior(rho);
  return scale * latent_terms(xb, yb, local) + core_.elbo_parameter_terms();
}

VariationalFit ProbitVariational::result() const {
  VariationalFit fit;
  core_.export_to(fit);
  fit.link = Link::probit;
  return fit;
}

VariationalFit fit_probit_cavi(const BinaryData& data, const FitSpec& spec, long n_iter,
                               double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (n_iter < 1) throw DomainError("n_iter must be >= 1");
  ProbitVariational state(data, spec);
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

VariationalFit fit_probit_svi(const BinaryData& data, const FitSpec& spec, long n_iter,
                              Index batch_size, const StepSchedule& schedule,
                              std::uint64_t seed) {
  if (n_iter < 1) throw DomainError("n_iter must be >= 1");
  if (batch_size < 1 || batch_size > data.n()) {
    throw DomainError("batch_size must satisfy 1 <= batch_size <= N");
  }
  ProbitVariational state(data, spec);
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
  fit.iterations = n_iter;
  return fit;
}

GibbsDraws fit_probit_gibbs(const BinaryData& data, const FitSpec& spec, long n_iter,
                            long burn_in, std::uint64_t seed) {
  data.validate();
  spec.hyper.validate();
  if (burn_in < 0 || burn_in >= n_iter) {
    throw DomainError("burn_in must satisfy 0 <= burn_in < n_iter");
  }
  const Index n = data.n();
  const Index p = data.p();
  Rng rng(seed);

  MatrixXd gram = MatrixXd::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.X.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  const VectorXd col_sums = data.X.colwise().sum().transpose();
  const double b0_precision = static_cast<double>(n) + 1.0 / spec.hyper.var_b0;

  ShrinkageSampler prior(spec.prior, spec.hyper, p);
  double b0 = 0.0;
  VectorXd b = VectorXd::Zero(p);
  VectorXd z(n);

  GibbsDraws draws;
  draws.link = Link::probit;
  draws.prior = spec.prior;
  draws.n_iter = n_iter;
  draws.burn_in = burn_in;
  const Index kept = n_iter - burn_in;
  draws.b0.resize(kept);
  draws.b.resize(kept, p);
  draws.lambda.resize(kept);
  draws.local_scales.resize(kept, spec.prior == Prior::ridge ? 0 : p);

  VectorXd eps(p);
  for (long iter = 1; iter <= n_iter; ++iter) {
    const VectorXd eta = (data.X * b).array() + b0;
    for (Index i = 0; i < n; ++i) z[i] = sample_trunc_normal(eta[i], side_of(data.y[i]), rng);

    b0 = (z.sum() - col_sums.dot(b)) / b0_precision + sample_normal(rng) / std::sqrt(b0_precision);

    MatrixXd precision = gram;
    precision.diagonal() += prior.prior_precision();
    Eigen::LLT<MatrixXd> llt(precision);
    const VectorXd diag = llt.matrixLLT().diagonal();
    if (llt.info() != Eigen::Success || !(diag.minCoeff() >= 1e-12 * diag.maxCoeff())) {
      throw NumericalError("singular coefficient precision at Gibbs iteration " +
                           std::to_string(iter));
    }
    for (Index j = 0; j < p; ++j) eps[j] = sample_normal(rng);
    const VectorXd centered = z.array() - b0;
    b = llt.solve(data.X.transpose() * centered) + llt.matrixU().solve(eps);

    prior.sample_locals(b, rng);
    prior.sample_global(b, rng);

    if (iter > burn_in) {
      const Index row = iter - burn_in - 1;
      draws.b0[row] = b0;
      draws.b.row(row) = b.transpose();
      draws.lambda[row] = prior.lambda();
      if (spec.prior != Prior::ridge) draws.local_scales.row(row) = prior.local_scales().transpose();
    }
  }
  return draws;
}

}  // namespace shrinkvb

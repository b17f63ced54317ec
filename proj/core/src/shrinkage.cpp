#include "shrinkvb/shrinkage.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/expfam.hpp"
#include "shrinkvb/special.hpp"

#include <cmath>

namespace shrinkvb {

namespace {

constexpr double kLogHalf = -0.69314718055994530942;

GammaFactor blend(const GammaFactor& old, double target_shape, double target_rate,
                  double rho) {
  if (rho == 1.0) return {target_shape, target_rate};
  const auto mixed = blend_gamma(GammaNatural::from_shape_rate(old.shape, old.rate),
                                 GammaNatural::from_shape_rate(target_shape, target_rate), rho);
  return {mixed.shape(), mixed.rate()};
}

// E[log Gamma(x; a, rate)] when the rate is itself random with factor `rate`.
double expected_log_gamma_random_rate(double a, const GammaFactor& rate, const GammaFactor& x) {
  return a * rate.mean_log() - special::lgamma(a) + (a - 1.0) * x.mean_log() -
         rate.mean() * x.mean();
}

}  // namespace

ShrinkageFactors::ShrinkageFactors(Prior prior, const PriorHyper& hyper, Index p)
    : prior_(prior), hyper_(hyper), p_(p), fixed_lambda_(hyper.fixed_lambda) {
  if (p < 1) throw DomainError("coefficient dimension must be >= 1");
  hyper_.validate();
  switch (prior_) {
    case Prior::ridge:
    case Prior::lasso:
      lambda_ = {hyper_.a_lambda, hyper_.b_lambda};
      break;
    case Prior::horseshoe:
      lambda_ = {1.0, 1.0};
      hs_global_aux_ = {0.5, 1.0};
      break;
  }
  if (prior_ == Prior::lasso) {
    lasso_locals_.assign(static_cast<std::size_t>(p), InverseGaussianFactor{1.0, 1.0});
  } else if (prior_ == Prior::horseshoe) {
    hs_locals_.assign(static_cast<std::size_t>(p), GammaFactor{1.0, 1.0});
    hs_local_aux_.assign(static_cast<std::size_t>(p), GammaFactor{0.5, 1.0});
  }
}

double ShrinkageFactors::expected_lambda() const {
  return fixed_lambda_ ? *fixed_lambda_ : lambda_.mean();
}

double ShrinkageFactors::expected_log_lambda() const {
  return fixed_lambda_ ? std::log(*fixed_lambda_) : lambda_.mean_log();
}

VectorXd ShrinkageFactors::expected_weights() const {
  VectorXd w = VectorXd::Ones(p_);
  if (prior_ == Prior::lasso) {
    for (Index j = 0; j < p_; ++j) w[j] = lasso_locals_[static_cast<std::size_t>(j)].mean;
  } else if (prior_ == Prior::horseshoe) {
    for (Index j = 0; j < p_; ++j) w[j] = hs_locals_[static_cast<std::size_t>(j)].mean();
  }
  return w;
}

VectorXd ShrinkageFactors::expected_prior_precision() const {
  return expected_lambda() * expected_weights();
}

void ShrinkageFactors::update_locals(const VectorXd& m2, double rho) {
  if (m2.size() != p_) throw DomainError("update_locals: dimension mismatch");
  const double e_lambda = expected_lambda();
  if (prior_ == Prior::lasso) {
    for (Index j = 0; j < p_; ++j) {
      auto& f = lasso_locals_[static_cast<std::size_t>(j)];
      // Only the coefficient of x in the GIG(-1/2, a, shape) kernel moves.
      const double target_a = e_lambda * m2[j];
      const double old_a = f.shape / (f.mean * f.mean);
      const double a = rho == 1.0 ? target_a : blend_scalar(old_a, target_a, rho);
      f.mean = std::sqrt(f.shape / a);
    }
  } else if (prior_ == Prior::horseshoe) {
    for (Index j = 0; j < p_; ++j) {
      const auto k = static_cast<std::size_t>(j);
      auto& local = hs_locals_[k];
      auto& aux = hs_local_aux_[k];
      local = blend(local, 1.0, aux.mean() + 0.5 * e_lambda * m2[j], rho);
      aux = blend(aux, 1.0, 1.0 + local.mean(), rho);
    }
  }
}

void ShrinkageFactors::update_global(const VectorXd& m2, double rho) {
  if (m2.size() != p_) throw DomainError("update_global: dimension mismatch");
  if (fixed_lambda_) return;
  const double weighted = 0.5 * expected_weights().dot(m2);
  const double half_p = 0.5 * static_cast<double>(p_);
  if (prior_ == Prior::horseshoe) {
    lambda_ = blend(lambda_, 0.5 + half_p, hs_global_aux_.mean() + weighted, rho);
    hs_global_aux_ = blend(hs_global_aux_, 1.0, 1.0 + lambda_.mean(), rho);
  } else {
    lambda_ = blend(lambda_, hyper_.a_lambda + half_p, hyper_.b_lambda + weighted, rho);
  }
}

double ShrinkageFactors::elbo(const VectorXd& m2) const {
  if (m2.size() != p_) throw DomainError("shrinkage elbo: dimension mismatch");
  const double e_lambda = expected_lambda();
  const double e_log_lambda = expected_log_lambda();
  const VectorXd w = expected_weights();

  double total = 0.0;
  for (Index j = 0; j < p_; ++j) {
    double e_log_w = 0.0;
    if (prior_ == Prior::lasso) {
      e_log_w = lasso_locals_[static_cast<std::size_t>(j)].mean_log();
    } else if (prior_ == Prior::horseshoe) {
      e_log_w = hs_locals_[static_cast<std::size_t>(j)].mean_log();
    }
    total += 0.5 * (e_log_lambda + e_log_w - special::kLog2Pi - e_lambda * w[j] * m2[j]);
  }

  if (prior_ == Prior::lasso) {
    for (const auto& f : lasso_locals_) {
      total += kLogHalf - 2.0 * f.mean_log() - 0.5 * f.mean_reciprocal() + f.entropy();
    }
  } else if (prior_ == Prior::horseshoe) {
    for (std::size_t k = 0; k < hs_locals_.size(); ++k) {
      const auto& local = hs_locals_[k];
      const auto& aux = hs_local_aux_[k];
      total += expected_log_gamma_random_rate(0.5, aux, local) + local.entropy();
      total += aux.expected_log_prior(0.5, 1.0) + aux.entropy();
    }
  }

  if (!fixed_lambda_) {
    if (prior_ == Prior::horseshoe) {
      total += expected_log_gamma_random_rate(0.5, hs_global_aux_, lambda_) + lambda_.entropy();
      total += hs_global_aux_.expected_log_prior(0.5, 1.0) + hs_global_aux_.entropy();
    } else {
      total += lambda_.expected_log_prior(hyper_.a_lambda, hyper_.b_lambda) + lambda_.entropy();
    }
  }
  return total;
}

std::optional<GammaFactor> ShrinkageFactors::lambda_factor() const {
  if (fixed_lambda_) return std::nullopt;
  return lambda_;
}

ShrinkageSampler::ShrinkageSampler(Prior prior, const PriorHyper& hyper, Index p)
    : prior_(prior),
      hyper_(hyper),
      lambda_fixed_(hyper.fixed_lambda.has_value()),
      lambda_(hyper.fixed_lambda.value_or(1.0)),
      weights_(VectorXd::Ones(p)),
      local_aux_(VectorXd::Ones(p)) {
  if (p < 1) throw DomainError("coefficient dimension must be >= 1");
  hyper_.validate();
}

VectorXd ShrinkageSampler::local_scales() const {
  switch (prior_) {
    case Prior::ridge:
      return {};
    case Prior::lasso:
      return weights_;
    case Prior::horseshoe:
      return weights_.cwiseInverse();
  }
  return {};
}

void ShrinkageSampler::sample_locals(const VectorXd& b, Rng& rng) {
  const Index p = weights_.size();
  if (prior_ == Prior::lasso) {
    const double root_lambda = std::sqrt(lambda_);
    for (Index j = 0; j < p; ++j) {
      const double magnitude = std::max(std::abs(b[j]), 1e-300);
      weights_[j] = sample_inverse_gaussian(1.0 / (root_lambda * magnitude), 1.0, rng);
    }
  } else if (prior_ == Prior::horseshoe) {
    for (Index j = 0; j < p; ++j) {
      weights_[j] = sample_gamma(1.0, local_aux_[j] + 0.5 * lambda_ * b[j] * b[j], rng);
      local_aux_[j] = sample_gamma(1.0, 1.0 + weights_[j], rng);
    }
  }
}

void ShrinkageSampler::sample_global(const VectorXd& b, Rng& rng) {
  if (lambda_fixed_) return;
  const double weighted = 0.5 * weights_.dot(b.cwiseAbs2());
  const double half_p = 0.5 * static_cast<double>(b.size());
  if (prior_ == Prior::horseshoe) {
    lambda_ = sample_gamma(0.5 + half_p, global_aux_ + weighted, rng);
    global_aux_ = sample_gamma(1.0, 1.0 + lambda_, rng);
  } else {
    lambda_ = sample_gamma(hyper_.a_lambda + half_p, hyper_.b_lambda + weighted, rng);
  }
}

}  // namespace shrinkvb

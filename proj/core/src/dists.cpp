#include "shrinkvb/dists.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/factors.hpp"
#include "shrinkvb/special.hpp"

#include <cmath>
#include <string>

namespace shrinkvb {

namespace {

constexpr double kRejectionCutover = 5.0;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

// Standard normal truncated to (lower, inf).
double sample_lower_truncated(double lower, Rng& rng) {
  if (lower <= kRejectionCutover) {
    // Sample the upper tail probability directly so large negative `lower`
    // keeps full precision.
    const double tail = special::norm_cdf(-lower);
    for (;;) {
      const double u = sample_uniform(rng);
      const double draw = -special::norm_quantile(u * tail);
      if (draw > lower && std::isfinite(draw)) return draw;
    }
  }
  // Robert (1995) exponential proposal with the optimal rate.
  const double alpha = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    const double draw = lower - std::log(sample_uniform(rng)) / alpha;
    const double gap = draw - alpha;
    if (std::log(sample_uniform(rng)) <= -0.5 * gap * gap) return draw;
  }
}

}  // namespace

double trunc_normal_mean(double location, TruncSide side) {
  if (!std::isfinite(location)) {
    throw DomainError("trunc_normal_mean: location must be finite");
  }
  if (side == TruncSide::positive) {
    return location + special::mills_ratio(location);
  }
  return location - special::mills_ratio(-location);
}

double sample_trunc_normal(double location, TruncSide side, Rng& rng) {
  if (side == TruncSide::positive) {
    for (;;) {
      const double z = location + sample_lower_truncated(-location, rng);
      if (z > 0.0) return z;
    }
  }
  for (;;) {
    const double z = location - sample_lower_truncated(location, rng);
    if (z <= 0.0) return z;
  }
}

double gamma_mean(double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return shape / rate;
}

double gamma_mean_log(double shape, double rate) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return special::digamma(shape) - std::log(rate);
}

double inv_gamma_mean_reciprocal(double shape, double scale) {
  require_positive(shape, "inverse gamma shape");
  require_positive(scale, "inverse gamma scale");
  return shape / scale;
}

double sample_uniform(Rng& rng) {
  // (0, 1): never returns an endpoint.
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

double sample_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

double sample_gamma(double shape, double rate, Rng& rng) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

double sample_inverse_gaussian(double mean, double shape, Rng& rng) {
  require_positive(mean, "inverse gaussian mean");
  require_positive(shape, "inverse gaussian shape");
  const double nu = sample_normal(rng);
  const double y = nu * nu;
  const double my = mean * y;
  const double x = mean + mean * my / (2.0 * shape) -
                   mean / (2.0 * shape) * std::sqrt(4.0 * shape * my + my * my);
  if (sample_uniform(rng) <= mean / (mean + x)) return x;
  return mean * mean / x;
}

double NormalFactor::entropy() const {
  return 0.5 * (special::kLog2Pi + 1.0 + std::log(var));
}

double GammaFactor::mean() const { return gamma_mean(shape, rate); }

double GammaFactor::mean_log() const { return gamma_mean_log(shape, rate); }

double GammaFactor::entropy() const {
  return shape - std::log(rate) + special::lgamma(shape) +
         (1.0 - shape) * special::digamma(shape);
}

double GammaFactor::expected_log_prior(double a, double b) const {
  return a * std::log(b) - special::lgamma(a) + (a - 1.0) * mean_log() - b * mean();
}

double InverseGaussianFactor::mean_log() const {
  // GIG(-1/2, shape/mean^2, shape): E[log x] = log(mean) + d/dp log K_p at
  // p = -1/2, which reduces to the scaled exponential integral.
  const double z = 2.0 * shape / mean;
  return std::log(mean) - special::scaled_expint_e1(z);
}

double InverseGaussianFactor::entropy() const {
  return 0.5 * std::log(2.0 * special::kPi / shape) + 1.5 * mean_log() + 0.5;
}

}  // namespace shrinkvb

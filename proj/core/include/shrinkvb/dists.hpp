#pragma once

#include <random>

namespace shrinkvb {

/// Random engine used by every sampler. Fits are reproducible per seed.
using Rng = std::mt19937_64;

/// Support of a unit-variance truncated normal: `positive` is (0, inf),
/// `negative` is (-inf, 0].
enum class TruncSide { positive, negative };

/// Mean of N(location, 1) truncated to `side`.
double trunc_normal_mean(double location, TruncSide side);

/// Draw from N(location, 1) truncated to `side`. Inverse-CDF in the body,
/// exponential rejection once the truncation point is more than five standard
/// deviations into the tail.
double sample_trunc_normal(double location, TruncSide side, Rng& rng);

double gamma_mean(double shape, double rate);
/// E[log x] for x ~ Gamma(shape, rate).
double gamma_mean_log(double shape, double rate);
/// E[1/x] for x ~ InvGamma(shape, scale).
double inv_gamma_mean_reciprocal(double shape, double scale);

double sample_normal(Rng& rng);
double sample_gamma(double shape, double rate, Rng& rng);
/// Michael-Schucany-Haas transformation sampler.
double sample_inverse_gaussian(double mean, double shape, Rng& rng);
double sample_uniform(Rng& rng);

}  // namespace shrinkvb

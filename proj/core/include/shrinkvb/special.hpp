#pragma once

// Scalar special functions used by the samplers and the ELBO terms.
// Reference values for the test grid come from 50-digit mpmath evaluations.

namespace shrinkvb::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLog2Pi = 1.83787706640934548356;
inline constexpr double kEulerGamma = 0.57721566490153286061;

double norm_pdf(double x);
double norm_cdf(double x);
double log_norm_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241, PPND16).
double norm_quantile(double p);

/// phi(x) / Phi(x), finite for every finite x.
double mills_ratio(double x);

/// exp(x^2) * erfc(x); uses a continued fraction for large x.
double erfcx(double x);

double digamma(double x);
double lgamma(double x);

/// exp(x) * E1(x) for x > 0, where E1 is the exponential integral.
double scaled_expint_e1(double x);

}  // namespace shrinkvb::special

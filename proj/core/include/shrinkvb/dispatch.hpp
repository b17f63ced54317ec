#pragma once

#include "shrinkvb/engine.hpp"
#include "shrinkvb/fit.hpp"
#include "shrinkvb/types.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace shrinkvb {

/// Algorithm settings for a single fit. Fields that do not apply to the
/// chosen algorithm are ignored.
struct FitOptions {
  CoeffFamily family = CoeffFamily::correlated;
  PriorHyper hyper{};
  long n_iter = 1000;
  std::optional<long> burn_in;  // Gibbs; defaults to n_iter / 2
  double rel_tol = 1e-4;        // CAVI
  std::optional<Index> batch_size;  // SVI, required
  StepSchedule schedule = StepSchedule::constant();
  std::uint64_t seed = 0;
};

using FitOutcome = std::variant<VariationalFit, GibbsDraws>;

/// Run the model named by `spec` on (x, y). Probit responses must be 0/1.
FitOutcome fit_model(const ModelSpec& spec, const MatrixXd& x, const VectorXd& y,
                     const FitOptions& options);

/// Posterior mean of the coefficients (excluding the intercept).
VectorXd coefficient_estimate(const FitOutcome& outcome);

}  // namespace shrinkvb

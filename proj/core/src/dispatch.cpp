#include "shrinkvb/dispatch.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/lm_models.hpp"
#include "shrinkvb/probit_models.hpp"

namespace shrinkvb {

FitOutcome fit_model(const ModelSpec& spec, const MatrixXd& x, const VectorXd& y,
                     const FitOptions& options) {
  if (options.n_iter < 1) throw UsageError("n_iter must be at least 1");
  const FitSpec fit_spec{spec.prior, options.family, options.hyper};
  const long burn_in = options.burn_in.value_or(options.n_iter / 2);
  if (spec.algorithm == Algorithm::gibbs && (burn_in < 0 || burn_in >= options.n_iter)) {
    throw UsageError("burn_in must lie in [0, n_iter)");
  }
  if (spec.algorithm == Algorithm::svi && !options.batch_size) {
    throw UsageError("SVI requires a batch size");
  }

  if (spec.link == Link::normal) {
    const RegressionData data{x, y};
    switch (spec.algorithm) {
      case Algorithm::gibbs:
        return fit_lm_gibbs(data, fit_spec, options.n_iter, burn_in, options.seed);
      case Algorithm::cavi:
        return fit_lm_cavi(data, fit_spec, options.n_iter, options.rel_tol);
      case Algorithm::svi:
        return fit_lm_svi(data, fit_spec, options.n_iter, *options.batch_size, options.schedule,
                          options.seed);
    }
  } else {
    const BinaryData data{x, y};
    switch (spec.algorithm) {
      case Algorithm::gibbs:
        return fit_probit_gibbs(data, fit_spec, options.n_iter, burn_in, options.seed);
      case Algorithm::cavi:
        return fit_probit_cavi(data, fit_spec, options.n_iter, options.rel_tol);
      case Algorithm::svi:
        return fit_probit_svi(data, fit_spec, options.n_iter, *options.batch_size,
                              options.schedule, options.seed);
    }
  }
  throw UsageError("unsupported model");
}

VectorXd coefficient_estimate(const FitOutcome& outcome) {
  if (const auto* fit = std::get_if<VariationalFit>(&outcome)) return fit->b.mu;
  const auto& draws = std::get<GibbsDraws>(outcome);
  return draws.b.colwise().mean().transpose();
}

}  // namespace shrinkvb

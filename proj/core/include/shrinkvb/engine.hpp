#pragma once

#include "shrinkvb/dists.hpp"
#include "shrinkvb/types.hpp"

#include <optional>
#include <vector>

namespace shrinkvb {

/// Step-size sequence for stochastic updates: either a constant rate or the
/// decaying rule rho_t = (t + omega)^(-kappa).
class StepSchedule {
 public:
  enum class Kind { constant, decaying };

  static constexpr double kDefaultRate = 0.01;

  static StepSchedule constant(double rho = kDefaultRate);
  static StepSchedule decaying(double omega, double kappa);

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }
  double omega() const { return omega_; }
  double kappa() const { return kappa_; }

 private:
  StepSchedule(Kind kind, double rho, double omega, double kappa)
      : kind_(kind), rho_(rho), omega_(omega), kappa_(kappa) {}

  Kind kind_;
  double rho_;
  double omega_;
  double kappa_;
};

/// Step size at iteration t (1-based). Always in (0, 1].
double step_size(const StepSchedule& schedule, long t);

/// Whether sum rho_t diverges and sum rho_t^2 converges. Constant rates fail
/// the second condition.
bool schedule_satisfies_robbins_monro(const StepSchedule& schedule);

/// S distinct indices drawn uniformly from [0, N). O(S) work per call.
std::vector<Index> minibatch_indices(Index n, Index s, Rng& rng);

struct ElboTrace {
  std::vector<double> values;
  std::optional<long> converged_at;
};

/// Relative change against the value five iterations back.
bool check_converged(const ElboTrace& trace, double rel_tol);

/// Seed for a sub-task derived from a master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace shrinkvb

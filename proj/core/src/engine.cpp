#include "shrinkvb/engine.hpp"

#include "shrinkvb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shrinkvb {

namespace {

constexpr std::size_t kConvergenceLag = 5;
constexpr double kTinyElbo = 1e-300;

}  // namespace

StepSchedule StepSchedule::constant(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("constant step size must lie in (0, 1], got " + std::to_string(rho));
  }
  return {Kind::constant, rho, 0.0, 0.0};
}

StepSchedule StepSchedule::decaying(double omega, double kappa) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw DomainError("step delay omega must be >= 0");
  }
  if (!(kappa > 0.5 && kappa <= 1.0)) {
    throw DomainError("forgetting rate kappa must lie in (0.5, 1], got " +
                      std::to_string(kappa));
  }
  return {Kind::decaying, 0.0, omega, kappa};
}

double step_size(const StepSchedule& schedule, long t) {
  if (t < 1) throw DomainError("step_size: iteration index must be >= 1");
  if (schedule.kind() == StepSchedule::Kind::constant) return schedule.rho();
  // t + omega >= 1 so the result never exceeds one.
  return std::pow(static_cast<double>(t) + schedule.omega(), -schedule.kappa());
}

bool schedule_satisfies_robbins_monro(const StepSchedule& schedule) {
  return schedule.kind() == StepSchedule::Kind::decaying && schedule.kappa() > 0.5 &&
         schedule.kappa() <= 1.0;
}

std::vector<Index> minibatch_indices(Index n, Index s, Rng& rng) {
  if (s < 1 || s > n) {
    throw DomainError("minibatch size must satisfy 1 <= S <= N (S=" + std::to_string(s) +
                      ", N=" + std::to_string(n) + ")");
  }
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(s));
  if (s == n) {
    for (Index i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  // Floyd's algorithm; a sorted copy keeps membership tests logarithmic.
  std::vector<Index> sorted;
  sorted.reserve(static_cast<std::size_t>(s));
  for (Index j = n - s; j < n; ++j) {
    const Index t = std::uniform_int_distribution<Index>(0, j)(rng);
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), t);
    const Index pick = (pos != sorted.end() && *pos == t) ? j : t;
    sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), pick), pick);
    out.push_back(pick);
  }
  return out;
}

bool check_converged(const ElboTrace& trace, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  const auto& v = trace.values;
  if (v.size() < kConvergenceLag + 1) return false;
  const double current = v.back();
  const double past = v[v.size() - 1 - kConvergenceLag];
  const double change = std::abs(current - past);
  if (std::abs(past) < kTinyElbo) return change < rel_tol;
  return change / std::abs(past) < rel_tol;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace shrinkvb

#pragma once
// Simulation designs, evaluation metrics and the replication/timing harness.

#include "shrinkvb/dispatch.hpp"
#include "shrinkvb/dists.hpp"
#include "shrinkvb/posterior.hpp"
#include "shrinkvb/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace shrinkvb {

struct LmSimDesign {
  Index n = 100;
  Index p = 75;
  double zero_frac = 0.8;
  double snr = 1.0;
  double ar_rho = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LmSimData {
  MatrixXd X;
  VectorXd y;
  VectorXd b_true;
  double b0_true = 0.0;
  double sigma2 = 1.0;
};

enum class BinaryLink { probit, logit };

struct BinarySimDesign {
  Index n = 500;
  Index p = 50;
  Index n_zero = 40;
  BinaryLink link = BinaryLink::probit;
  double ar_rho = 0.5;
  std::optional<double> b0;  // drawn from N(0, 1) when absent
  std::uint64_t seed = 0;

  void validate() const;
};

struct BinarySimData {
  MatrixXd X;
  VectorXd y;
  VectorXd b_true;
  double b0_true = 0.0;
};

/// n x p design with AR(1) rows: cov(x_j, x_k) = ar_rho^|j-k|, unit variances.
MatrixXd gen_design_matrix(Index n, Index p, double ar_rho, Rng& rng);

/// b ~ N(0, I) with exactly `n_zero` entries (chosen uniformly) set to zero.
VectorXd gen_sparse_coefficients(Index p, Index n_zero, Rng& rng);

/// sigma^2 is the sample variance of X b divided by snr, so the realized
/// signal-to-noise ratio equals snr exactly.
LmSimData gen_lm_data(const LmSimDesign& design);
BinarySimData gen_binary_data(const BinarySimDesign& design);

/// Draw responses for a fresh design matrix under known coefficients.
VectorXd draw_lm_response(const MatrixXd& x, const VectorXd& b, double b0, double sigma2,
                          Rng& rng);
VectorXd draw_binary_response(const MatrixXd& x, const VectorXd& b, double b0, BinaryLink link,
                              Rng& rng);

// ---- metrics ---------------------------------------------------------------

/// Mean squared coefficient error averaged over replicates and coefficients.
double mse(const std::vector<VectorXd>& b_true, const std::vector<VectorXd>& b_hat);

/// ||X b - X b_hat|| / ||X b||.
double mspe(const MatrixXd& x_test, const VectorXd& b_true, const VectorXd& b_hat);

/// Fraction of coefficients with lower <= truth <= upper.
double coverage(const VectorXd& b_true, const VectorXd& lower, const VectorXd& upper);

/// Fraction of unordered index pairs on which two binary partitions agree.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

/// Average precision: sum over distinct score thresholds (descending) of
/// precision times the recall gained at that threshold. Tied scores enter
/// together as one threshold.
double auc_pr(const std::vector<int>& labels, const std::vector<double>& scores);

using SelectionRule = std::function<bool(const SummaryRow&)>;

/// Selected iff the credible interval excludes zero (closed interval).
bool interval_excludes_zero(const SummaryRow& row);

/// One entry per coefficient (the intercept row is skipped).
std::vector<int> variable_select(const SummaryTable& table,
                                 const SelectionRule& rule = interval_excludes_zero);
std::vector<int> variable_select(const FitOutcome& outcome, double level = 0.95,
                                 const SelectionRule& rule = interval_excludes_zero);

SummaryTable summarize(const FitOutcome& outcome, double level,
                       const std::vector<std::string>& names = {});

// ---- harness ---------------------------------------------------------------

struct MethodSpec {
  ModelSpec model;
  FitOptions options;

  /// e.g. "lm_ridge_cavi/correlated"
  std::string label() const;
};

struct MetricsReport {
  std::string method;
  long replicate = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double mspe = 0.0;
  double coverage = 0.0;
  std::optional<double> rand_index;
  std::optional<double> auc_pr;
  double wall_clock_s = 0.0;
};

enum class StudyKind { lm, binary };

struct StudyConfig {
  StudyKind kind = StudyKind::lm;
  LmSimDesign lm{};
  BinarySimDesign binary{};
  std::vector<MethodSpec> methods;
  long replicates = 50;
  std::uint64_t master_seed = 0;
  Index n_test = 500;
  double level = 0.95;
  int jobs = 1;
};

/// One report per (replicate, method), ordered by replicate then method.
/// Replicate r uses data seed derive_seed(master_seed, r); results do not
/// depend on `jobs`.
std::vector<MetricsReport> run_replication(const StudyConfig& config);

/// Per-method means of every metric, in method order.
std::vector<MetricsReport> aggregate_reports(const std::vector<MetricsReport>& reports);

struct TimingConfig {
  enum class Axis { vary_p, vary_n };
  Axis axis = Axis::vary_p;
  Index fixed = 1000;
  std::vector<Index> values;
  std::vector<MethodSpec> methods;
  long datasets = 5;
  double zero_frac = 0.8;
  std::uint64_t master_seed = 0;
};

struct TimingRow {
  std::string method;
  Index n = 0;
  Index p = 0;
  std::vector<double> seconds;  // one per dataset
  double mean_seconds = 0.0;
};

/// Wall-clock seconds per method per grid point, single-threaded.
std::vector<TimingRow> run_timing(const TimingConfig& config);

}  // namespace shrinkvb

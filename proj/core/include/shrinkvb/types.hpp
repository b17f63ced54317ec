#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>

namespace shrinkvb {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Link { normal, probit };
enum class Prior { ridge, lasso, horseshoe };
enum class CoeffFamily { correlated, independent };
enum class Algorithm { gibbs, cavi, svi };

std::string_view to_string(Link link);
std::string_view to_string(Prior prior);
std::string_view to_string(CoeffFamily family);
std::string_view to_string(Algorithm algorithm);

/// Library version, e.g. "0.3.0".
std::string_view library_version();

/// Hyperparameters shared by every model.
///
/// `a_lambda`/`b_lambda` parameterize the Gamma prior on the global
/// coefficient precision for ridge and LASSO (the horseshoe fixes its own
/// half-Cauchy construction and ignores them). `a_tau`/`b_tau` are the error
/// precision prior of the normal linear model. Setting `fixed_lambda` or
/// `fixed_tau` pins that precision at a value instead of learning it.
struct PriorHyper {
  double a_lambda = 0.01;
  double b_lambda = 0.01;
  double a_tau = 0.01;
  double b_tau = 0.01;
  double var_b0 = 1e6;
  std::optional<double> fixed_lambda;
  std::optional<double> fixed_tau;

  void validate() const;
};

/// Prior and variational family for a single fit. The family only matters
/// for CAVI and SVI.
struct FitSpec {
  Prior prior = Prior::ridge;
  CoeffFamily family = CoeffFamily::correlated;
  PriorHyper hyper{};
};

/// One cell of the link x prior x algorithm grid, e.g. `lm_hs_svi`.
struct ModelSpec {
  Link link = Link::normal;
  Prior prior = Prior::ridge;
  Algorithm algorithm = Algorithm::cavi;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

}  // namespace shrinkvb

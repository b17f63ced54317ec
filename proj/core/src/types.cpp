#include "shrinkvb/types.hpp"

#include "shrinkvb/errors.hpp"

#include <cmath>
#include <string>

namespace shrinkvb {

std::string_view to_string(Link link) {
  return link == Link::normal ? "lm" : "probit";
}

std::string_view to_string(Prior prior) {
  switch (prior) {
    case Prior::ridge:
      return "ridge";
    case Prior::lasso:
      return "lasso";
    case Prior::horseshoe:
      return "hs";
  }
  return "?";
}

std::string_view to_string(CoeffFamily family) {
  return family == CoeffFamily::correlated ? "correlated" : "independent";
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::gibbs:
      return "gibbs";
    case Algorithm::cavi:
      return "cavi";
    case Algorithm::svi:
      return "svi";
  }
  return "?";
}

void PriorHyper::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be positive and finite");
    }
  };
  positive(a_lambda, "a_lambda");
  positive(b_lambda, "b_lambda");
  positive(a_tau, "a_tau");
  positive(b_tau, "b_tau");
  positive(var_b0, "var_b0");
  if (fixed_lambda) positive(*fixed_lambda, "fixed_lambda");
  if (fixed_tau) positive(*fixed_tau, "fixed_tau");
}

}  // namespace shrinkvb

namespace shrinkvb {

std::string_view library_version() { return SHRINKVB_VERSION; }

}  // namespace shrinkvb

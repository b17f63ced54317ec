#include "shrinkvb/model_name.hpp"

#include "shrinkvb/errors.hpp"

#include <array>

namespace shrinkvb {

namespace {

constexpr std::array kLinks{Link::normal, Link::probit};
constexpr std::array kPriors{Prior::ridge, Prior::lasso, Prior::horseshoe};
constexpr std::array kAlgorithms{Algorithm::gibbs, Algorithm::cavi, Algorithm::svi};

std::string joined_names() {
  std::string out;
  for (const auto& n : valid_model_names()) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

std::string model_name(const ModelSpec& spec) {
  std::string out{to_string(spec.link)};
  out += '_';
  out += to_string(spec.prior);
  out += '_';
  out += to_string(spec.algorithm);
  return out;
}

std::vector<std::string> valid_model_names() {
  std::vector<std::string> out;
  for (auto link : kLinks)
    for (auto prior : kPriors)
      for (auto algorithm : kAlgorithms) out.push_back(model_name({link, prior, algorithm}));
  return out;
}

ModelSpec parse_model_name(std::string_view name) {
  if (name.starts_with("mv_lm") || name.starts_with("mv_probit")) {
    throw UsageError("multivariate models (" + std::string(name) +
                     ") are out of scope for this tool");
  }
  for (auto link : kLinks)
    for (auto prior : kPriors)
      for (auto algorithm : kAlgorithms) {
        const ModelSpec spec{link, prior, algorithm};
        if (model_name(spec) == name) return spec;
      }
  throw UsageError("unknown model '" + std::string(name) + "'; valid models: " + joined_names());
}

}  // namespace shrinkvb

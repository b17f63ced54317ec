#pragma once

#include "shrinkvb/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace shrinkvb {

/// Parse a `link_prior_algorithm` name such as "lm_hs_svi". Throws
/// UsageError for anything outside the 18-name grid; multivariate names are
/// recognized and rejected as unsupported.
ModelSpec parse_model_name(std::string_view name);

std::string model_name(const ModelSpec& spec);

/// Every accepted name, in link, prior, algorithm order.
std::vector<std::string> valid_model_names();

}  // namespace shrinkvb

// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_CONFIG_HPP_
#define RULEDECK_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "ruledeck/metrics.hpp"
#include "ruledeck/train.hpp"

namespace ruledeck {

// Defaults for all subcommands; individual flags override these values.
struct RunConfig {
  std::string registry_path;  // empty selects the built-in registry
  WeightProfile profile;
  TokenClassWeights class_weights;
  double alpha = 0.6;
  std::size_t k = 3;
  bool strict = false;
  std::uint64_t seed = 0;
};

// Plain-text key=value file ('#' starts a comment). Keys: registry, w1, w2,
// w3, weight.command, weight.layer, weight.condition, weight.option,
// weight.structure, alpha, k, strict, seed. Unknown keys and values that
// violate the field constraints raise std::runtime_error.
RunConfig parse_config(std::string_view text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Path named by the RULEDECK_CONFIG environment variable, if set.
std::optional<std::string> env_config_path();

}  // namespace ruledeck

#endif  // RULEDECK_CONFIG_HPP_

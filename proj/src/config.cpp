// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ruledeck {

namespace {

std::string trim(std::string_view text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

double parse_double(const std::string& value, const std::string& where) {
  try {
    std::size_t consumed = 0;
    double parsed = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": expected a number, got '" + value + "'");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& origin) {
  RunConfig config;
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ": line " + std::to_string(lineno);
    std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(where + ": expected key=value");
    std::string key = trim(trimmed.substr(0, eq));
    std::string value = trim(trimmed.substr(eq + 1));

    if (key == "registry") {
      config.registry_path = value;
    } else if (key == "w1") {
      config.profile.w1 = parse_double(value, where);
    } else if (key == "w2") {
      config.profile.w2 = parse_double(value, where);
    } else if (key == "w3") {
      config.profile.w3 = parse_double(value, where);
    } else if (key == "weight.command") {
      config.class_weights.command = parse_double(value, where);
    } else if (key == "weight.layer") {
      config.class_weights.layer = parse_double(value, where);
    } else if (key == "weight.condition") {
      config.class_weights.condition = parse_double(value, where);
    } else if (key == "weight.option") {
      config.class_weights.option = parse_double(value, where);
    } else if (key == "weight.structure") {
      config.class_weights.structure = parse_double(value, where);
    } else if (key == "alpha") {
      config.alpha = parse_double(value, where);
    } else if (key == "k") {
      double k = parse_double(value, where);
      if (k < 1 || k != std::floor(k))
        throw std::runtime_error(where + ": k must be a positive integer");
      config.k = static_cast<std::size_t>(k);
    } else if (key == "strict") {
      if (value == "true")
        config.strict = true;
      else if (value == "false")
        config.strict = false;
      else
        throw std::runtime_error(where + ": strict must be true or false");
    } else if (key == "seed") {
      try {
        config.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw std::runtime_error(where + ": seed must be a non-negative integer");
      }
    } else {
      throw std::runtime_error(where + ": unknown key " + key);
    }
  }

  if (!config.profile.valid())
    throw std::runtime_error(origin + ": w1+w2+w3 must sum to 1 with each in [0,1]");
  if (!config.class_weights.valid())
    throw std::runtime_error(origin +
                             ": class weights must be positive with command >= layer > option");
  if (config.alpha < 0.0 || config.alpha > 1.0)
    throw std::runtime_error(origin + ": alpha must lie in [0,1]");
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::optional<std::string> env_config_path() {
  const char* value = std::getenv("RULEDECK_CONFIG");
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

}  // namespace ruledeck

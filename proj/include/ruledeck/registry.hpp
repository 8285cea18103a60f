// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <string>

namespace ruledeck {

/// Per-command constraints checked by validate().
struct CommandRegistryEntry {
  std::string name;
  int min_layers = 1;
  int max_layers = 1;
  bool requires_condition = false;
  std::set<std::string> allowed_options;
  bool allows_block = true;
};

class CommandRegistry {
 public:
  void add(CommandRegistryEntry entry);  // throws on duplicate name
  const CommandRegistryEntry* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, CommandRegistryEntry> entries_;
};

/// Built-in registry: SPACE_CMD (2 layers), WIDTH_CMD (1), ENC_CMD (2),
/// AREA_CMD (1), DENSITY_CMD (1); all require a condition, allow the MODE
/// option and a trailing block.
const CommandRegistry& default_registry();

/// Loads a registry from a plain-text config file:
///
///   [SPACE_CMD]
///   min_layers = 2
///   max_layers = 2
///   requires_condition = true
///   allowed_options = MODE
///   allows_block = true
///
/// Throws std::runtime_error with a line number on malformed input.
CommandRegistry load_registry(const std::string& path);
CommandRegistry parse_registry(const std::string& text, const std::string& origin);

}  // namespace ruledeck

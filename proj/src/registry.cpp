// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/registry.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ruledeck {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value, const std::string& where) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::runtime_error(where + ": expected boolean, got '" + value + "'");
}

}  // namespace

void CommandRegistry::add(CommandRegistryEntry entry) {
  if (entry.name.empty())
    throw std::runtime_error("registry entry has an empty command name");
  if (entry.min_layers < 1 || entry.max_layers < entry.min_layers)
    throw std::runtime_error("registry entry " + entry.name + ": invalid layer bounds");
  auto [it, inserted] = entries_.emplace(entry.name, std::move(entry));
  if (!inserted)
    throw std::runtime_error("duplicate registry entry " + it->first);
}

const CommandRegistryEntry* CommandRegistry::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const CommandRegistry& default_registry() {
  static const CommandRegistry registry = [] {
    CommandRegistry r;
    auto entry = [](const char* name, int min_layers, int max_layers) {
      CommandRegistryEntry e;
      e.name = name;
      e.min_layers = min_layers;
      e.max_layers = max_layers;
      e.requires_condition = true;
      e.allowed_options = {"MODE"};
      e.allows_block = true;
      return e;
    };
    r.add(entry("SPACE_CMD", 2, 2));
    r.add(entry("WIDTH_CMD", 1, 1));
    r.add(entry("ENC_CMD", 2, 2));
    r.add(entry("AREA_CMD", 1, 1));
    r.add(entry("DENSITY_CMD", 1, 1));
    return r;
  }();
  return registry;
}

CommandRegistry parse_registry(const std::string& text, const std::string& origin) {
  CommandRegistry registry;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_section = false;
  CommandRegistryEntry current;

  auto flush = [&] {
    if (have_section) registry.add(current);
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw std::runtime_error(where + ": unclosed section header");
      flush();
      current = CommandRegistryEntry{};
      current.name = trim(s.substr(1, s.size() - 2));
      if (current.name.empty())
        throw std::runtime_error(where + ": empty section name");
      have_section = true;
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(where + ": expected 'key = value'");
    if (!have_section)
      throw std::runtime_error(where + ": key outside of a [COMMAND] section");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key == "min_layers") {
      current.min_layers = std::stoi(value);
    } else if (key == "max_layers") {
      current.max_layers = std::stoi(value);
    } else if (key == "requires_condition") {
      current.requires_condition = parse_bool(value, where);
    } else if (key == "allows_block") {
      current.allows_block = parse_bool(value, where);
    } else if (key == "allowed_options") {
      current.allowed_options.clear();
      std::istringstream opts(value);
      std::string opt;
      while (std::getline(opts, opt, ',')) {
        opt = trim(opt);
        if (!opt.empty()) current.allowed_options.insert(opt);
      }
    } else {
      throw std::runtime_error(where + ": unknown key '" + key + "'");
    }
  }
  flush();
  return registry;
}

CommandRegistry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_registry(buf.str(), path);
}

}  // namespace ruledeck

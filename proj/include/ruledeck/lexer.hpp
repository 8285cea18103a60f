// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "ruledeck/diagnostics.hpp"
#include "ruledeck/token.hpp"

namespace ruledeck {

struct LexResult {
  std::vector<Token> tokens;  // always ends with an Eof token
  Diagnostics diagnostics;
};

/// Splits source text into tokens. `//` comments and whitespace are skipped.
/// Lexing never throws: an unterminated string or illegal character is
/// reported as an ERROR diagnostic and scanning resumes at the next
/// whitespace (illegal character) or line end (unterminated string).
LexResult tokenize(std::string_view source);

}  // namespace ruledeck

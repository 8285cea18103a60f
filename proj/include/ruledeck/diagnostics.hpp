// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ruledeck {

/// Byte range in a source buffer plus the 1-based line/column of its start.
struct SourceSpan {
  std::size_t start_offset = 0;
  std::size_t end_offset = 0;  // half-open: [start_offset, end_offset)
  int line = 1;
  int column = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;     // short machine identifier, e.g. "unterminated-string"
  std::string message;  // human-readable text
  SourceSpan span;
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic make_error(std::string code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::Error, std::move(code), std::move(message), span};
}

inline Diagnostic make_warning(std::string code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::Warning, std::move(code), std::move(message), span};
}

std::size_t count_errors(const Diagnostics& diags);

/// Renders as "line:col: severity [code] message".
std::string to_string(const Diagnostic& diag);

}  // namespace ruledeck

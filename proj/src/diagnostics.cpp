// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/diagnostics.hpp"

#include <sstream>

namespace ruledeck {

std::size_t count_errors(const Diagnostics& diags) {
  std::size_t n = 0;
  for (const auto& d : diags)
    if (d.severity == Severity::Error) ++n;
  return n;
}

std::string to_string(const Diagnostic& diag) {
  std::ostringstream out;
  out << diag.span.line << ':' << diag.span.column << ": "
      << (diag.severity == Severity::Error ? "error" : "warning") << " ["
      << diag.code << "] " << diag.message;
  return out.str();
}

}  // namespace ruledeck

// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ruledeck/diagnostics.hpp"

namespace ruledeck {

enum class TokenKind {
  Ident,
  Number,
  String,
  CmpOp,  // one of < <= > >= == !=
  Assign,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Keyword,  // one of AND OR NOT REPORT
  Eof,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;  // exact source slice; empty for Eof
  SourceSpan span;

  bool is(TokenKind k) const { return kind == k; }
  bool is_keyword(const char* word) const {
    return kind == TokenKind::Keyword && text == word;
  }
};

}  // namespace ruledeck

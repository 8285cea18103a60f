// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/lexer.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

namespace ruledeck {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

bool is_keyword(std::string_view word) {
  return word == "AND" || word == "OR" || word == "NOT" || word == "REPORT";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '\n') {
        newline();
      } else if (c == '/' && peek(1) == '/') {
        skip_line_comment();
      } else if (is_ident_start(c)) {
        lex_ident();
      } else if (is_digit(c) || c == '.' ||
                 (c == '-' && (is_digit(peek(1)) || peek(1) == '.'))) {
        lex_number();
      } else if (c == '"') {
        lex_string();
      } else {
        lex_operator();
      }
    }
    Token eof;
    eof.kind = TokenKind::Eof;
    eof.span = span_here(0);
    result_.tokens.push_back(eof);
    return std::move(result_);
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    ++pos_;
    ++column_;
  }

  void newline() {
    ++pos_;
    ++line_;
    column_ = 1;
  }

  SourceSpan span_here(std::size_t length) const {
    return SourceSpan{pos_, pos_ + length, line_, column_};
  }

  void emit(TokenKind kind, std::size_t length) {
    Token tok;
    tok.kind = kind;
    tok.text = std::string(src_.substr(pos_, length));
    tok.span = span_here(length);
    result_.tokens.push_back(std::move(tok));
    for (std::size_t i = 0; i < length; ++i) advance();
  }

  void skip_line_comment() {
    while (pos_ < src_.size() && src_[pos_] != '\n') advance();
  }

  void lex_ident() {
    std::size_t len = 0;
    while (pos_ + len < src_.size() && is_ident_char(src_[pos_ + len])) ++len;
    std::string_view word = src_.substr(pos_, len);
    emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident, len);
  }

  // -?(digits[.digits*] | .digits+); no exponent form in this DSL.
  void lex_number() {
    std::size_t len = 0;
    if (src_[pos_] == '-') ++len;
    while (pos_ + len < src_.size() && is_digit(src_[pos_ + len])) ++len;
    if (pos_ + len < src_.size() && src_[pos_ + len] == '.') {
      ++len;
      while (pos_ + len < src_.size() && is_digit(src_[pos_ + len])) ++len;
    }
    std::string text(src_.substr(pos_, len));
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || end == text.c_str() || !std::isfinite(value)) {
      result_.diagnostics.push_back(
          make_error("malformed-number", "'" + text + "' is not a finite decimal",
                     span_here(len)));
      for (std::size_t i = 0; i < len; ++i) advance();
      return;
    }
    emit(TokenKind::Number, len);
  }

  void lex_string() {
    SourceSpan open = span_here(1);
    std::size_t len = 1;  // opening quote
    while (true) {
      if (pos_ + len >= src_.size() || src_[pos_ + len] == '\n') {
        result_.diagnostics.push_back(
            make_error("unterminated-string", "unterminated string", open));
        for (std::size_t i = 0; i < len; ++i) advance();
        return;
      }
      char c = src_[pos_ + len];
      if (c == '\\' && pos_ + len + 1 < src_.size()) {
        len += 2;
        continue;
      }
      ++len;
      if (c == '"') break;
    }
    emit(TokenKind::String, len);
  }

  void lex_operator() {
    char c = src_[pos_];
    char next = peek(1);
    switch (c) {
      case '{': emit(TokenKind::LBrace, 1); return;
      case '}': emit(TokenKind::RBrace, 1); return;
      case '(': emit(TokenKind::LParen, 1); return;
      case ')': emit(TokenKind::RParen, 1); return;
      case '<': emit(TokenKind::CmpOp, next == '=' ? 2 : 1); return;
      case '>': emit(TokenKind::CmpOp, next == '=' ? 2 : 1); return;
      case '=':
        if (next == '=') emit(TokenKind::CmpOp, 2);
        else emit(TokenKind::Assign, 1);
        return;
      case '!':
        if (next == '=') { emit(TokenKind::CmpOp, 2); return; }
        break;
      default:
        break;
    }
    // Illegal character: report once, resume at the next whitespace.
    result_.diagnostics.push_back(make_error(
        "illegal-character", std::string("illegal character '") + c + "'", span_here(1)));
    while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  LexResult result_;
};

}  // namespace

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "IDENT";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::String: return "STRING";
    case TokenKind::CmpOp: return "CMP_OP";
    case TokenKind::Assign: return "ASSIGN";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::Keyword: return "KEYWORD";
    case TokenKind::Eof: return "EOF";
  }
  return "UNKNOWN";
}

}  // namespace ruledeck

// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/parser.hpp"

#include <cassert>

#include "ruledeck/lexer.hpp"

namespace ruledeck {

namespace {

bool ends_with_cmd(const std::string& name) {
  return name.size() > 4 && name.compare(name.size() - 4, 4, "_CMD") == 0;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const CommandRegistry& registry, Diagnostics& diags)
      : tokens_(std::move(tokens)), registry_(registry), diags_(diags) {}

  std::unique_ptr<ParseTree> run() {
    auto deck = make_node(NodeKind::Deck);
    deck->span = SourceSpan{0, eof().span.end_offset, 1, 1};
    while (!peek().is(TokenKind::Eof)) {
      if (at_statement_start(pos_)) {
        std::size_t start = pos_;
        auto stmt = parse_statement();
        if (stmt) {
          deck->children.push_back(std::move(stmt));
        } else {
          recover(start);
        }
      } else {
        error("expected-statement", "expected a rule check or layer definition", peek().span);
        recover(pos_);
      }
    }
    return deck;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& eof() const { return tokens_.back(); }

  Token take() { return tokens_[pos_++]; }

  bool is_command_name(const Token& tok) const {
    return tok.is(TokenKind::Ident) &&
           (ends_with_cmd(tok.text) || registry_.contains(tok.text));
  }

  bool at_statement_start(std::size_t i) const {
    const Token& tok = i < tokens_.size() ? tokens_[i] : tokens_.back();
    if (!tok.is(TokenKind::Ident)) return false;
    if (is_command_name(tok)) return true;
    const Token& next = i + 1 < tokens_.size() ? tokens_[i + 1] : tokens_.back();
    return next.is(TokenKind::Assign);
  }

  // Skips past a failed statement; always makes progress.
  void recover(std::size_t failed_at) {
    if (pos_ <= failed_at) pos_ = failed_at + 1;
    while (pos_ < tokens_.size() && !peek().is(TokenKind::Eof) && !at_statement_start(pos_))
      ++pos_;
  }

  void error(const char* code, std::string message, SourceSpan span) {
    diags_.push_back(make_error(code, std::move(message), span));
  }

  static std::unique_ptr<ParseTree> make_node(NodeKind kind) {
    auto node = std::make_unique<ParseTree>();
    node->kind = kind;
    return node;
  }

  std::unique_ptr<ParseTree> make_terminal(Token tok) {
    auto node = make_node(NodeKind::Terminal);
    node->span = tok.span;
    node->token = std::move(tok);
    return node;
  }

  static void close_span(ParseTree& node) {
    assert(!node.children.empty());
    node.span = node.children.front()->span;
    node.span.end_offset = node.children.back()->span.end_offset;
  }

  // statement := layer_def | rule_check
  std::unique_ptr<ParseTree> parse_statement() {
    if (peek().is(TokenKind::Ident) && peek(1).is(TokenKind::Assign) &&
        !is_command_name(peek()))
      return parse_layer_def();
    if (is_command_name(peek())) return parse_rule_check();
    error("expected-statement", "expected a rule check or layer definition", peek().span);
    return nullptr;
  }

  // layer_def := IDENT "=" layer_expr
  std::unique_ptr<ParseTree> parse_layer_def() {
    auto node = make_node(NodeKind::LayerDef);
    node->children.push_back(make_terminal(take()));  // target
    node->children.push_back(make_terminal(take()));  // '='
    auto expr = parse_or_expr();
    if (!expr) return nullptr;
    node->children.push_back(std::move(expr));
    close_span(*node);
    return node;
  }

  // or_expr := and_expr { "OR" and_expr }
  std::unique_ptr<ParseTree> parse_or_expr() {
    auto left = parse_and_expr();
    if (!left) return nullptr;
    while (peek().is_keyword("OR")) {
      auto node = make_node(NodeKind::LayerExpr);
      node->children.push_back(std::move(left));
      node->children.push_back(make_terminal(take()));
      auto right = parse_and_expr();
      if (!right) return nullptr;
      node->children.push_back(std::move(right));
      close_span(*node);
      left = std::move(node);
    }
    return left;
  }

  // and_expr := unary { "AND" unary }
  std::unique_ptr<ParseTree> parse_and_expr() {
    auto left = parse_unary();
    if (!left) return nullptr;
    while (peek().is_keyword("AND")) {
      auto node = make_node(NodeKind::LayerExpr);
      node->children.push_back(std::move(left));
      node->children.push_back(make_terminal(take()));
      auto right = parse_unary();
      if (!right) return nullptr;
      node->children.push_back(std::move(right));
      close_span(*node);
      left = std::move(node);
    }
    return left;
  }

  // unary := "NOT" unary | "(" layer_expr ")" | IDENT
  std::unique_ptr<ParseTree> parse_unary() {
    if (peek().is_keyword("NOT")) {
      auto node = make_node(NodeKind::LayerExpr);
      node->children.push_back(make_terminal(take()));
      auto child = parse_unary();
      if (!child) return nullptr;
      node->children.push_back(std::move(child));
      close_span(*node);
      return node;
    }
    if (peek().is(TokenKind::LParen)) {
      auto node = make_node(NodeKind::LayerExpr);
      SourceSpan open = peek().span;
      node->children.push_back(make_terminal(take()));
      auto inner = parse_or_expr();
      if (!inner) return nullptr;
      node->children.push_back(std::move(inner));
      if (!peek().is(TokenKind::RParen)) {
        error("missing-paren", "missing closing parenthesis", open);
        return nullptr;
      }
      node->children.push_back(make_terminal(take()));
      close_span(*node);
      return node;
    }
    if (peek().is(TokenKind::Ident)) {
      auto node = make_node(NodeKind::LayerExpr);
      node->children.push_back(make_terminal(take()));
      close_span(*node);
      return node;
    }
    error("expected-layer-expr", "expected a layer name, NOT, or '('", peek().span);
    return nullptr;
  }

  // rule_check := CMD_IDENT IDENT { IDENT } [ condition ] { option } [ block ]
  std::unique_ptr<ParseTree> parse_rule_check() {
    auto node = make_node(NodeKind::RuleCheck);
    node->children.push_back(make_terminal(take()));  // command name

    // Layer run: the first identifier is always a layer; later identifiers
    // stop at a statement boundary or at an option-looking token pair.
    std::size_t layer_count = 0;
    while (peek().is(TokenKind::Ident)) {
      if (is_command_name(peek())) break;
      if (peek(1).is(TokenKind::Assign)) break;
      if (layer_count > 0) {
        if (peek().text == "READ" && peek(1).is(TokenKind::Ident) && peek(1).text == "ALL")
          break;
        if (peek(1).is(TokenKind::Number) || peek(1).is(TokenKind::String)) break;
      }
      node->children.push_back(make_terminal(take()));
      ++layer_count;
    }
    if (layer_count == 0) {
      error("expected-layer", "expected at least one layer after the command name",
            peek().span);
      return nullptr;
    }

    if (peek().is(TokenKind::CmpOp)) {
      auto cond = parse_condition();
      if (!cond) return nullptr;
      node->children.push_back(std::move(cond));
    }

    while (peek().is(TokenKind::Ident) && !is_command_name(peek()) &&
           !peek(1).is(TokenKind::Assign)) {
      node->children.push_back(parse_option());
    }

    if (peek().is(TokenKind::LBrace)) {
      auto block = parse_block();
      if (!block) return nullptr;
      node->children.push_back(std::move(block));
    }
    close_span(*node);
    return node;
  }

  // condition := CMP_OP NUMBER [ "um" ]
  std::unique_ptr<ParseTree> parse_condition() {
    auto node = make_node(NodeKind::Condition);
    SourceSpan op_span = peek().span;
    node->children.push_back(make_terminal(take()));
    if (!peek().is(TokenKind::Number)) {
      error("condition-missing-number", "condition operator without a number", op_span);
      return nullptr;
    }
    node->children.push_back(make_terminal(take()));
    if (peek().is(TokenKind::Ident) && peek().text == "um")
      node->children.push_back(make_terminal(take()));
    close_span(*node);
    return node;
  }

  // option := "READ" "ALL" | IDENT [ NUMBER | STRING ]
  std::unique_ptr<ParseTree> parse_option() {
    auto node = make_node(NodeKind::Option);
    if (peek().text == "READ" && peek(1).is(TokenKind::Ident) && peek(1).text == "ALL") {
      node->children.push_back(make_terminal(take()));
      node->children.push_back(make_terminal(take()));
    } else {
      node->children.push_back(make_terminal(take()));
      if (peek().is(TokenKind::Number) || peek().is(TokenKind::String))
        node->children.push_back(make_terminal(take()));
    }
    close_span(*node);
    return node;
  }

  // block := "{" { "REPORT" STRING | statement } "}"
  std::unique_ptr<ParseTree> parse_block() {
    auto node = make_node(NodeKind::Block);
    SourceSpan open = peek().span;
    node->children.push_back(make_terminal(take()));  // '{'
    while (true) {
      if (peek().is(TokenKind::RBrace)) {
        node->children.push_back(make_terminal(take()));
        break;
      }
      if (peek().is(TokenKind::Eof)) {
        error("missing-brace", "missing closing brace", open);
        return nullptr;
      }
      if (peek().is_keyword("REPORT")) {
        auto report = make_node(NodeKind::ReportStmt);
        SourceSpan kw = peek().span;
        report->children.push_back(make_terminal(take()));
        if (!peek().is(TokenKind::String)) {
          error("report-missing-string", "REPORT requires a quoted message", kw);
          return nullptr;
        }
        report->children.push_back(make_terminal(take()));
        close_span(*report);
        node->children.push_back(std::move(report));
        continue;
      }
      auto stmt = parse_statement();
      if (!stmt) return nullptr;
      node->children.push_back(std::move(stmt));
    }
    close_span(*node);
    return node;
  }

  std::vector<Token> tokens_;
  const CommandRegistry& registry_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
};

std::string derive_option_key(const ParseTree& option) {
  // READ ALL is the spelled form of the MODE option.
  if (option.children.size() == 2 && option.child(0).token.text == "READ" &&
      option.child(1).token.kind == TokenKind::Ident && option.child(1).token.text == "ALL")
    return "MODE";
  return option.child(0).token.text;
}

void validate_statement(const ParseTree& stmt, const CommandRegistry& registry, bool strict,
                        Diagnostics& diags);

void validate_block(const ParseTree& block, const CommandRegistry& registry, bool strict,
                    Diagnostics& diags) {
  for (const auto& child : block.children) {
    if (child->kind == NodeKind::RuleCheck || child->kind == NodeKind::LayerDef)
      validate_statement(*child, registry, strict, diags);
  }
}

void validate_statement(const ParseTree& stmt, const CommandRegistry& registry, bool strict,
                        Diagnostics& diags) {
  if (stmt.kind != NodeKind::RuleCheck) return;

  const Token& name = stmt.child(0).token;
  const CommandRegistryEntry* entry = registry.find(name.text);
  if (entry == nullptr) {
    auto diag = strict ? make_error("unknown-command", "unknown command " + name.text, name.span)
                       : make_warning("unknown-command", "unknown command " + name.text, name.span);
    diags.push_back(std::move(diag));
  }

  int layer_count = 0;
  const ParseTree* block = nullptr;
  for (std::size_t i = 1; i < stmt.children.size(); ++i) {
    const ParseTree& child = stmt.child(i);
    if (child.is_terminal() && child.token.is(TokenKind::Ident))
      ++layer_count;
    else if (child.kind == NodeKind::Block)
      block = &child;
  }

  if (entry != nullptr) {
    if (layer_count < entry->min_layers) {
      diags.push_back(make_error(
          "layer-count", "layer count " + std::to_string(layer_count) + " below minimum " +
                             std::to_string(entry->min_layers),
          name.span));
    } else if (layer_count > entry->max_layers) {
      diags.push_back(make_error(
          "layer-count", "layer count " + std::to_string(layer_count) + " above maximum " +
                             std::to_string(entry->max_layers),
          name.span));
    }

    bool has_condition = false;
    for (const auto& child : stmt.children)
      if (child->kind == NodeKind::Condition) has_condition = true;
    if (entry->requires_condition && !has_condition)
      diags.push_back(
          make_error("missing-condition", "missing required condition", name.span));

    for (const auto& child : stmt.children) {
      if (child->kind != NodeKind::Option) continue;
      std::string key = derive_option_key(*child);
      if (entry->allowed_options.count(key) == 0)
        diags.push_back(make_error(
            "disallowed-option", "option key " + key + " not allowed for " + name.text,
            child->span));
    }

    if (block != nullptr && !entry->allows_block)
      diags.push_back(
          make_error("disallowed-block", "block not allowed for " + name.text, block->span));
  }

  if (block != nullptr) validate_block(*block, registry, strict, diags);
}

}  // namespace

ParseResult parse_deck(std::string_view source, const CommandRegistry& registry) {
  LexResult lexed = tokenize(source);
  ParseResult result;
  result.diagnostics = std::move(lexed.diagnostics);
  Parser parser(std::move(lexed.tokens), registry, result.diagnostics);
  result.deck = parser.run();
  return result;
}

Diagnostics validate(const ParseTree& deck, const CommandRegistry& registry, bool strict) {
  Diagnostics diags;
  for (const auto& stmt : deck.children)
    validate_statement(*stmt, registry, strict, diags);
  return diags;
}

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Deck: return "DECK";
    case NodeKind::RuleCheck: return "RULE_CHECK";
    case NodeKind::LayerDef: return "LAYER_DEF";
    case NodeKind::LayerExpr: return "LAYER_EXPR";
    case NodeKind::Condition: return "CONDITION";
    case NodeKind::Option: return "OPTION";
    case NodeKind::Block: return "BLOCK";
    case NodeKind::ReportStmt: return "REPORT_STMT";
    case NodeKind::Terminal: return "TERMINAL";
  }
  return "UNKNOWN";
}

}  // namespace ruledeck

// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/ast.hpp"

#include <cassert>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace ruledeck {

namespace {

std::string decode_string_token(std::string_view raw) {
  assert(raw.size() >= 2 && raw.front() == '"');
  std::string out;
  out.reserve(raw.size() - 2);
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
    out.push_back(raw[i]);
  }
  return out;
}

std::string encode_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

double parse_number(const std::string& text) {
  return std::strtod(text.c_str(), nullptr);
}

LayerExprNode lower_expr(const ParseTree& node) {
  assert(node.kind == NodeKind::LayerExpr);
  if (node.children.size() == 1) {
    LayerExprNode leaf;
    leaf.kind = LayerExprNode::Kind::Leaf;
    leaf.layer = node.child(0).token.text;
    return leaf;
  }
  if (node.children.size() == 2) {  // NOT child
    LayerExprNode unary;
    unary.kind = LayerExprNode::Kind::Not;
    unary.children.push_back(lower_expr(node.child(1)));
    return unary;
  }
  assert(node.children.size() == 3);
  if (node.child(0).is_terminal() && node.child(0).token.is(TokenKind::LParen))
    return lower_expr(node.child(1));  // parentheses carry no meaning in the AST
  LayerExprNode binary;
  binary.kind = node.child(1).token.is_keyword("AND") ? LayerExprNode::Kind::And
                                                      : LayerExprNode::Kind::Or;
  binary.children.push_back(lower_expr(node.child(0)));
  binary.children.push_back(lower_expr(node.child(2)));
  return binary;
}

OptionNode lower_option(const ParseTree& node) {
  OptionNode option;
  if (node.children.size() == 2 && node.child(0).token.text == "READ" &&
      node.child(1).token.is(TokenKind::Ident) && node.child(1).token.text == "ALL") {
    option.key = "MODE";
    option.values.push_back({OptionAtom::Kind::Ident, "READ"});
    option.values.push_back({OptionAtom::Kind::Ident, "ALL"});
    return option;
  }
  option.key = node.child(0).token.text;
  if (node.children.size() == 2) {
    const Token& value = node.child(1).token;
    if (value.is(TokenKind::Number))
      option.values.push_back(
          {OptionAtom::Kind::Number, canonical_number(parse_number(value.text))});
    else
      option.values.push_back({OptionAtom::Kind::Str, decode_string_token(value.text)});
  }
  return option;
}

void lower_statement(const ParseTree& stmt, std::vector<RuleAst>& out);

void lower_rule_check(const ParseTree& stmt, std::vector<RuleAst>& out) {
  CommandNode cmd;
  cmd.name = stmt.child(0).token.text;
  std::vector<const ParseTree*> nested;
  for (std::size_t i = 1; i < stmt.children.size(); ++i) {
    const ParseTree& child = stmt.child(i);
    if (child.is_terminal()) {
      cmd.layers.push_back(child.token.text);
    } else if (child.kind == NodeKind::Condition) {
      Condition cond;
      cond.op = child.child(0).token.text;
      cond.value = parse_number(child.child(1).token.text);
      if (child.children.size() == 3) cond.unit = child.child(2).token.text;
      cmd.condition = std::move(cond);
    } else if (child.kind == NodeKind::Option) {
      cmd.options.push_back(lower_option(child));
    } else if (child.kind == NodeKind::Block) {
      for (const auto& entry : child.children) {
        if (entry->kind == NodeKind::ReportStmt) {
          OptionNode report;
          report.key = "REPORT";
          report.values.push_back(
              {OptionAtom::Kind::Str, decode_string_token(entry->child(1).token.text)});
          cmd.options.push_back(std::move(report));
        } else if (!entry->is_terminal()) {
          nested.push_back(entry.get());
        }
      }
    }
  }
  out.push_back(std::move(cmd));
  for (const ParseTree* stmt_node : nested) lower_statement(*stmt_node, out);
}

void lower_statement(const ParseTree& stmt, std::vector<RuleAst>& out) {
  if (stmt.kind == NodeKind::RuleCheck) {
    lower_rule_check(stmt, out);
    return;
  }
  assert(stmt.kind == NodeKind::LayerDef);
  LayerDefNode def;
  def.target = stmt.child(0).token.text;
  def.expr = lower_expr(stmt.child(2));
  out.push_back(std::move(def));
}

void serialize_expr(const LayerExprNode& expr, std::string& out) {
  switch (expr.kind) {
    case LayerExprNode::Kind::Leaf:
      out += "(LAYER " + expr.layer + ")";
      return;
    case LayerExprNode::Kind::Not:
      out += "(NOT ";
      serialize_expr(expr.children[0], out);
      out += ")";
      return;
    case LayerExprNode::Kind::And:
    case LayerExprNode::Kind::Or:
      out += expr.kind == LayerExprNode::Kind::And ? "(AND " : "(OR ";
      serialize_expr(expr.children[0], out);
      out += " ";
      serialize_expr(expr.children[1], out);
      out += ")";
      return;
  }
}

void serialize_atom(const OptionAtom& atom, std::string& out) {
  if (atom.kind == OptionAtom::Kind::Str)
    out += encode_string(atom.text);
  else
    out += atom.text;
}

// --- deserialization -------------------------------------------------------

struct SexprToken {
  enum class Kind { Open, Close, Atom, Str, End };
  Kind kind = Kind::End;
  std::string text;  // decoded for Str
  std::size_t offset = 0;
};

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  // Throws DeserializeError on lexical problems.
  SexprToken next() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
    if (pos_ >= text_.size()) return {SexprToken::Kind::End, "", text_.size()};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return {SexprToken::Kind::Open, "(", start};
    }
    if (c == ')') {
      ++pos_;
      return {SexprToken::Kind::Close, ")", start};
    }
    if (c == '"') {
      std::string decoded;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') {
          if (pos_ + 1 >= text_.size() ||
              (text_[pos_ + 1] != '"' && text_[pos_ + 1] != '\\'))
            throw DeserializeError{
                "malformed escape at offset " + std::to_string(pos_), pos_};
          ++pos_;
        }
        decoded.push_back(text_[pos_]);
        ++pos_;
      }
      if (pos_ >= text_.size())
        throw DeserializeError{"unterminated string at offset " + std::to_string(start),
                               start};
      ++pos_;  // closing quote
      return {SexprToken::Kind::Str, std::move(decoded), start};
    }
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' &&
           text_[pos_] != '\n' && text_[pos_] != '\r' && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '"')
      ++pos_;
    return {SexprToken::Kind::Atom, std::string(text_.substr(start, pos_ - start)), start};
  }

  std::size_t size() const { return text_.size(); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail_unbalanced(std::size_t offset) {
  throw DeserializeError{"unbalanced parentheses at offset " + std::to_string(offset),
                         offset};
}

[[noreturn]] void fail(const std::string& message, std::size_t offset) {
  throw DeserializeError{message, offset};
}

class AstReader {
 public:
  explicit AstReader(std::string_view text) : reader_(text) {}

  RuleAst read() {
    advance();
    RuleAst ast = read_root();
    if (tok_.kind == SexprToken::Kind::Close) fail_unbalanced(tok_.offset);
    if (tok_.kind != SexprToken::Kind::End)
      fail("trailing characters at offset " + std::to_string(tok_.offset), tok_.offset);
    return ast;
  }

 private:
  void advance() { tok_ = reader_.next(); }

  void expect_open() {
    if (tok_.kind == SexprToken::Kind::End) fail_unbalanced(reader_.size());
    if (tok_.kind != SexprToken::Kind::Open)
      fail("expected ( at offset " + std::to_string(tok_.offset), tok_.offset);
    advance();
  }

  void expect_close() {
    if (tok_.kind == SexprToken::Kind::End) fail_unbalanced(reader_.size());
    if (tok_.kind != SexprToken::Kind::Close)
      fail("expected ) at offset " + std::to_string(tok_.offset), tok_.offset);
    advance();
  }

  std::string expect_atom(const char* what) {
    if (tok_.kind == SexprToken::Kind::End) fail_unbalanced(reader_.size());
    if (tok_.kind != SexprToken::Kind::Atom)
      fail(std::string("expected ") + what + " at offset " + std::to_string(tok_.offset),
           tok_.offset);
    std::string text = std::move(tok_.text);
    advance();
    return text;
  }

  bool at_open() const { return tok_.kind == SexprToken::Kind::Open; }

  RuleAst read_root() {
    std::size_t start = tok_.offset;
    expect_open();
    std::string tag = expect_atom("node tag");
    if (tag == "COMMAND") return read_command(start);
    if (tag == "LAYERDEF") return read_layer_def(start);
    fail("unknown node tag " + tag + " at offset " + std::to_string(start), start);
  }

  CommandNode read_command(std::size_t start) {
    CommandNode cmd;
    bool saw_name = false;
    bool saw_layers = false;
    while (at_open()) {
      std::size_t section_start = tok_.offset;
      advance();
      std::string tag = expect_atom("section tag");
      if (tag == "NAME") {
        cmd.name = expect_atom("command name");
        saw_name = true;
      } else if (tag == "LAYERS") {
        while (at_open()) {
          std::size_t layer_start = tok_.offset;
          advance();
          std::string inner = expect_atom("LAYER tag");
          if (inner != "LAYER")
            fail("unknown node tag " + inner + " at offset " + std::to_string(layer_start),
                 layer_start);
          cmd.layers.push_back(expect_atom("layer name"));
          expect_close();
        }
        saw_layers = true;
      } else if (tag == "CONDITION") {
        cmd.condition = read_condition();
      } else if (tag == "OPTIONS") {
        while (at_open()) cmd.options.push_back(read_option());
      } else {
        fail("unknown node tag " + tag + " at offset " + std::to_string(section_start),
             section_start);
      }
      expect_close();
    }
    expect_close();
    if (!saw_name) fail("NAME section required", start);
    if (!saw_layers || cmd.layers.empty()) fail("LAYERS section required", start);
    return cmd;
  }

  Condition read_condition() {
    Condition cond;
    bool saw_op = false;
    bool saw_val = false;
    while (at_open()) {
      std::size_t start = tok_.offset;
      advance();
      std::string tag = expect_atom("section tag");
      if (tag == "OP") {
        cond.op = expect_atom("comparison operator");
        saw_op = true;
      } else if (tag == "VAL") {
        std::size_t val_offset = tok_.offset;
        std::string text = expect_atom("condition value");
        const char* begin = text.c_str();
        char* end = nullptr;
        errno = 0;
        cond.value = std::strtod(begin, &end);
        if (end == begin)
          fail("malformed number in VAL at offset " + std::to_string(val_offset),
               val_offset);
        if (*end != '\0') cond.unit = std::string(end);
        saw_val = true;
      } else {
        fail("unknown node tag " + tag + " at offset " + std::to_string(start), start);
      }
      expect_close();
    }
    if (!saw_op) fail("OP section required", tok_.offset);
    if (!saw_val) fail("VAL section required", tok_.offset);
    return cond;
  }

  OptionNode read_option() {
    advance();  // consume (
    OptionNode option;
    option.key = expect_atom("option key");
    while (tok_.kind == SexprToken::Kind::Atom || tok_.kind == SexprToken::Kind::Str) {
      OptionAtom atom;
      if (tok_.kind == SexprToken::Kind::Str) {
        atom.kind = OptionAtom::Kind::Str;
        atom.text = tok_.text;
      } else {
        const std::string& text = tok_.text;
        char* end = nullptr;
        double value = std::strtod(text.c_str(), &end);
        if (end == text.c_str() + text.size() && end != text.c_str()) {
          atom.kind = OptionAtom::Kind::Number;
          atom.text = canonical_number(value);
        } else {
          atom.kind = OptionAtom::Kind::Ident;
          atom.text = text;
        }
      }
      option.values.push_back(std::move(atom));
      advance();
    }
    expect_close();
    return option;
  }

  LayerDefNode read_layer_def(std::size_t start) {
    LayerDefNode def;
    bool saw_target = false;
    bool saw_expr = false;
    while (at_open()) {
      std::size_t section_start = tok_.offset;
      advance();
      std::string tag = expect_atom("section tag");
      if (tag == "TARGET") {
        def.target = expect_atom("target name");
        saw_target = true;
      } else if (tag == "EXPR") {
        def.expr = read_expr();
        saw_expr = true;
      } else {
        fail("unknown node tag " + tag + " at offset " + std::to_string(section_start),
             section_start);
      }
      expect_close();
    }
    expect_close();
    if (!saw_target) fail("TARGET section required", start);
    if (!saw_expr) fail("EXPR section required", start);
    return def;
  }

  LayerExprNode read_expr() {
    std::size_t start = tok_.offset;
    expect_open();
    std::string tag = expect_atom("expression tag");
    LayerExprNode node;
    if (tag == "LAYER") {
      node.kind = LayerExprNode::Kind::Leaf;
      node.layer = expect_atom("layer name");
    } else if (tag == "NOT") {
      node.kind = LayerExprNode::Kind::Not;
      node.children.push_back(read_expr());
    } else if (tag == "AND" || tag == "OR") {
      node.kind = tag == "AND" ? LayerExprNode::Kind::And : LayerExprNode::Kind::Or;
      node.children.push_back(read_expr());
      node.children.push_back(read_expr());
    } else {
      fail("unknown node tag " + tag + " at offset " + std::to_string(start), start);
    }
    expect_close();
    return node;
  }

  SexprReader reader_;
  SexprToken tok_;
};

}  // namespace

std::string canonical_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  assert(ec == std::errc());
  return std::string(buf, ptr);
}

std::vector<RuleAst> lower(const ParseTree& deck) {
  if (deck.kind != NodeKind::Deck)
    throw std::invalid_argument("lower requires a DECK parse tree");
  std::vector<RuleAst> out;
  for (const auto& stmt : deck.children) lower_statement(*stmt, out);
  return out;
}

std::string serialize(const RuleAst& ast) {
  std::string out;
  if (const auto* cmd = std::get_if<CommandNode>(&ast)) {
    out += "(COMMAND (NAME " + cmd->name + ") (LAYERS";
    for (const std::string& layer : cmd->layers) out += " (LAYER " + layer + ")";
    out += ")";
    if (cmd->condition) {
      out += " (CONDITION (OP " + cmd->condition->op + ") (VAL " +
             canonical_number(cmd->condition->value);
      if (cmd->condition->unit) out += *cmd->condition->unit;
      out += "))";
    }
    if (!cmd->options.empty()) {
      out += " (OPTIONS";
      for (const OptionNode& option : cmd->options) {
        out += " (" + option.key;
        for (const OptionAtom& atom : option.values) {
          out += " ";
          serialize_atom(atom, out);
        }
        out += ")";
      }
      out += ")";
    }
    out += ")";
  } else {
    const auto& def = std::get<LayerDefNode>(ast);
    out += "(LAYERDEF (TARGET " + def.target + ") (EXPR ";
    serialize_expr(def.expr, out);
    out += "))";
  }
  return out;
}

DeserializeResult deserialize(std::string_view text) {
  DeserializeResult result;
  try {
    AstReader reader(text);
    result.ast = reader.read();
  } catch (const DeserializeError& err) {
    result.error = err;
  }
  return result;
}

}  // namespace ruledeck

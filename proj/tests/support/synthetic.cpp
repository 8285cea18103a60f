// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <string>

namespace ruledeck::testing {

namespace {

std::string pad3(std::size_t value) {
  std::string digits = std::to_string(value);
  return std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

}  // namespace

std::vector<ruledeck::CorpusExample> identity_corpus() {
  std::vector<ruledeck::CorpusExample> corpus;
  for (std::size_t i = 0; i < 50; ++i) {
    ruledeck::CorpusExample example;
    example.id = "ex" + pad3(i);
    std::string n = std::to_string(i);
    std::string value = "0." + std::to_string(10 + i);
    switch (i % 5) {
      case 0:
        example.nl = "minimum width of layer M" + n;
        example.code = "WIDTH_CMD M" + n + " >= " + value;
        break;
      case 1:
        example.nl = "spacing between A" + n + " and B" + n;
        example.code = "SPACE_CMD A" + n + " B" + n + " >= " + value + " READ ALL";
        break;
      case 2:
        example.nl = "enclosure of V" + n + " by M" + n + " with report";
        example.code = "ENC_CMD V" + n + " M" + n + " > " + value + " READ ALL {\n" +
                       "    REPORT \"enclosure check " + n + "\"\n}";
        break;
      case 3:
        example.nl = "area of the derived layer L" + n;
        example.code = "L" + n + " = A" + n + " AND B" + n + "\nAREA_CMD L" + n +
                       " >= 1." + n;
        break;
      default:
        example.nl = "density ceiling for M" + n;
        example.code = "DENSITY_CMD M" + n + " <= " + value + " um {\n" +
                       "    REPORT \"density window " + n + "\"\n}";
        break;
    }
    corpus.push_back(std::move(example));
  }
  return corpus;
}

std::vector<ruledeck::CorpusExample> stratification_corpus() {
  std::vector<ruledeck::CorpusExample> corpus;
  for (std::size_t i = 0; i < 241; ++i) {
    ruledeck::CorpusExample example;
    example.id = "s" + pad3(i);
    std::string n = std::to_string(i);
    example.nl = "simple width rule " + n;
    example.code = "WIDTH_CMD M" + n + " >= 0." + std::to_string(10 + i % 80);
    corpus.push_back(std::move(example));
  }
  for (std::size_t i = 0; i < 347; ++i) {
    ruledeck::CorpusExample example;
    example.id = "m" + pad3(i);
    std::string n = std::to_string(i);
    example.nl = "paired spacing and enclosure rule " + n;
    example.code = "SPACE_CMD A" + n + " B" + n + " >= 0.3\nENC_CMD A" + n + " B" + n +
                   " >= 0.1";
    corpus.push_back(std::move(example));
  }
  for (std::size_t i = 0; i < 153; ++i) {
    ruledeck::CorpusExample example;
    example.id = "x" + pad3(i);
    std::string n = std::to_string(i);
    example.nl = "derived boolean layer rule " + n;
    example.code = "D" + n + " = A" + n + " AND (B" + n + " OR C" + n + ")\nWIDTH_CMD D" +
                   n + " >= 0.1";
    corpus.push_back(std::move(example));
  }
  return corpus;
}

std::vector<ruledeck::KnowledgeEntry> synthetic_kb() {
  const char* commands[] = {"SPACE_CMD", "WIDTH_CMD", "ENC_CMD", "AREA_CMD",
                            "DENSITY_CMD"};
  const int layer_counts[] = {2, 1, 2, 1, 1};
  const char* ops[] = {">=", "<=", ">", "<", "=="};
  const char* op_words[] = {"at least", "at most", "above", "below", "exactly"};

  std::vector<ruledeck::KnowledgeEntry> entries;
  std::size_t serial = 0;
  for (std::size_t ci = 0; ci < 5; ++ci) {
    for (std::size_t oi = 0; oi < 5; ++oi) {
      for (std::size_t vi = 0; vi < 4; ++vi) {  // option/block shape
        ruledeck::KnowledgeEntry entry;
        entry.id = "kb" + pad3(serial);
        std::string n = std::to_string(serial);

        std::string layers = "P" + n;
        std::string layer_words = "layer P" + n;
        if (layer_counts[ci] == 2) {
          layers += " Q" + n;
          layer_words = "layers P" + n + " and Q" + n;
        }
        std::string code = std::string(commands[ci]) + " " + layers + " " + ops[oi] +
                           " 0." + std::to_string(20 + serial % 70);
        std::string shape_word;
        switch (vi) {
          case 0:
            shape_word = "plain";
            break;
          case 1:
            code += " READ ALL";
            shape_word = "readall";
            break;
          case 2:
            code += " {\n    REPORT \"check " + n + "\"\n}";
            shape_word = "reported";
            break;
          default:
            code += " READ ALL {\n    REPORT \"check " + n + "\"\n}";
            shape_word = "readall reported";
            break;
        }
        entry.code = std::move(code);
        entry.nl_text = "uniq" + n + " " + shape_word + " " + commands[ci] +
                        " constraint keeping " + layer_words + " " + op_words[oi] +
                        " the limit";
        entry.intent_tags.insert(commands[ci]);
        entries.push_back(std::move(entry));
        ++serial;
      }
    }
  }
  return entries;
}

}  // namespace ruledeck::testing

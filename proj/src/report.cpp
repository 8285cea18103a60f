// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include "ruledeck/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ruledeck/metrics.hpp"

namespace ruledeck {

namespace {

const char* const kPhases[] = {"train", "val", "test"};

bool known_phase(const std::string& phase) {
  for (const char* name : kPhases)
    if (phase == name) return true;
  return false;
}

std::string fixed(double value, int precision) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(precision);
  out << value;
  return out.str();
}

void append_cell(std::string& line, const std::string& text, std::size_t width) {
  line += text;
  for (std::size_t i = text.size(); i < width + 2; ++i) line += ' ';
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream in(line);
  while (std::getline(in, field, ',')) {
    std::size_t begin = field.find_first_not_of(" \t\r");
    std::size_t end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? ""
                         : field.substr(begin, end - begin + 1));
  }
  return fields;
}

}  // namespace

ModelMetrics load_metrics_file(const std::string& label, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& err) {
    throw std::runtime_error(path + ": " + err.what());
  }
  if (!doc.is_object()) throw std::runtime_error(path + ": expected a JSON object");

  ModelMetrics model;
  model.label = label;
  if (doc.contains("corpus")) {  // a scoring report: treat as the test phase
    const auto& corpus = doc["corpus"];
    PhaseMetrics metrics;
    metrics.acc = corpus.value("ast_weighted", 0.0);
    metrics.bleu = corpus.value("bleu", 0.0);
    metrics.rouge_l = corpus.value("rouge_l", 0.0);
    model.phases["test"] = metrics;
    return model;
  }
  for (const auto& [phase, values] : doc.items()) {
    if (!known_phase(phase))
      throw std::runtime_error(path + ": unknown phase " + phase);
    if (!values.is_object() || !values.contains("acc"))
      throw std::runtime_error(path + ": phase " + phase + " needs an acc field");
    PhaseMetrics metrics;
    metrics.acc = values["acc"].get<double>();
    metrics.bleu = values.value("bleu", 0.0);
    metrics.rouge_l = values.value("rouge_l", 0.0);
    model.phases[phase] = metrics;
  }
  if (model.phases.empty()) throw std::runtime_error(path + ": no phases found");
  return model;
}

ComparisonReport build_comparison(const std::vector<ModelMetrics>& models,
                                  const std::optional<std::string>& baseline) {
  ComparisonReport report;
  report.models = models;
  report.baseline = baseline;

  const ModelMetrics* base = nullptr;
  if (baseline) {
    for (const ModelMetrics& model : models)
      if (model.label == *baseline) base = &model;
    if (base == nullptr)
      throw std::runtime_error("baseline label " + *baseline + " not found");
  }

  if (base != nullptr) {
    for (const ModelMetrics& model : models) {
      if (model.label == base->label) continue;
      for (const char* phase : kPhases) {
        auto model_it = model.phases.find(phase);
        auto base_it = base->phases.find(phase);
        if (model_it == model.phases.end() && base_it == base->phases.end()) continue;
        if (model_it == model.phases.end() || base_it == base->phases.end())
          throw std::runtime_error("phase " + std::string(phase) +
                                   " not present for both " + model.label + " and " +
                                   base->label);
        report.improvements.push_back(
            {model.label, phase,
             relative_improvement(base_it->second.acc, model_it->second.acc)});
      }
    }
  }

  for (const ModelMetrics& model : models) {
    GapAnalysis gap;
    gap.label = model.label;
    auto train = model.phases.find("train");
    auto val = model.phases.find("val");
    auto test = model.phases.find("test");
    if (train != model.phases.end() && test != model.phases.end())
      gap.train_test_gap = train->second.acc - test->second.acc;
    if (val != model.phases.end() && test != model.phases.end())
      gap.val_test_gap = val->second.acc - test->second.acc;
    report.gaps.push_back(std::move(gap));
  }
  return report;
}

std::string comparison_text(const ComparisonReport& report) {
  const std::size_t width = 12;
  std::string out;
  std::string header;
  append_cell(header, "Model", width);
  append_cell(header, "Phase", width);
  append_cell(header, "Acc", width);
  append_cell(header, "BLEU", width);
  append_cell(header, "ROUGE-L", width);
  out += header + "\n";
  for (const ModelMetrics& model : report.models) {
    for (const char* phase : kPhases) {
      auto it = model.phases.find(phase);
      if (it == model.phases.end()) continue;
      std::string line;
      append_cell(line, model.label, width);
      append_cell(line, phase, width);
      append_cell(line, fixed(it->second.acc, 3), width);
      append_cell(line, fixed(it->second.bleu, 3), width);
      append_cell(line, fixed(it->second.rouge_l, 3), width);
      out += line + "\n";
    }
  }
  if (!report.improvements.empty()) {
    out += "\nRelative accuracy improvement over " + *report.baseline + ":\n";
    for (const Improvement& improvement : report.improvements)
      out += "  " + improvement.label + " " + improvement.phase + ": " +
             fixed(improvement.percent, 1) + "%\n";
  }
  bool any_gap = false;
  for (const GapAnalysis& gap : report.gaps)
    if (gap.train_test_gap || gap.val_test_gap) any_gap = true;
  if (any_gap) {
    out += "\nAccuracy gaps (percentage points):\n";
    for (const GapAnalysis& gap : report.gaps) {
      if (!gap.train_test_gap && !gap.val_test_gap) continue;
      out += "  " + gap.label + ":";
      if (gap.train_test_gap)
        out += " train-test " + fixed(*gap.train_test_gap, 3);
      if (gap.val_test_gap) {
        if (gap.train_test_gap) out += ",";
        out += " val-test " + fixed(*gap.val_test_gap, 3);
      }
      out += "\n";
    }
  }
  return out;
}

CurveSummary summarize_curves(const std::string& csv_text) {
  std::stringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty curve file");
  std::vector<std::string> header = split_csv_row(line);
  const std::vector<std::string> expected = {"epoch", "phase",  "loss",
                                             "acc",   "bleu",   "rouge_l"};
  if (header != expected)
    throw std::runtime_error("curve header must be epoch,phase,loss,acc,bleu,rouge_l");

  struct Row {
    int epoch;
    double loss, acc, bleu, rouge_l;
  };
  std::map<std::string, std::map<int, Row>> by_phase;
  CurveSummary summary;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_row(line);
    if (fields.size() != 6)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 6 fields");
    Row row;
    std::string phase = fields[1];
    if (!known_phase(phase))
      throw std::runtime_error("line " + std::to_string(lineno) + ": unknown phase " +
                               phase);
    try {
      row.epoch = std::stoi(fields[0]);
      row.loss = std::stod(fields[2]);
      row.acc = std::stod(fields[3]);
      row.bleu = std::stod(fields[4]);
      row.rouge_l = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
    }
    by_phase[phase][row.epoch] = row;
    auto [it, inserted] = summary.final_by_phase.try_emplace(phase);
    if (inserted || it->second.epoch <= row.epoch)
      it->second = {row.epoch, row.loss, row.acc, row.bleu, row.rouge_l};
  }
  if (summary.final_by_phase.empty()) throw std::runtime_error("no curve rows");

  auto train_it = by_phase.find("train");
  auto val_it = by_phase.find("val");
  if (train_it != by_phase.end() && val_it != by_phase.end()) {
    for (const auto& [epoch, val_row] : val_it->second) {
      auto match = train_it->second.find(epoch);
      if (match == train_it->second.end()) continue;
      const Row& train_row = match->second;
      auto consider = [&summary, epoch](const char* metric, double gap) {
        auto it = summary.max_val_train_gap.find(metric);
        if (it == summary.max_val_train_gap.end() || gap > it->second) {
          summary.max_val_train_gap[metric] = gap;
          summary.max_gap_epoch[metric] = epoch;
        }
      };
      consider("loss", std::abs(val_row.loss - train_row.loss));
      consider("acc", std::abs(val_row.acc - train_row.acc));
      consider("bleu", std::abs(val_row.bleu - train_row.bleu));
      consider("rouge_l", std::abs(val_row.rouge_l - train_row.rouge_l));
    }
  }
  return summary;
}

std::string curves_text(const CurveSummary& summary) {
  std::string out = "Final values per phase:\n";
  for (const char* phase : kPhases) {
    auto it = summary.final_by_phase.find(phase);
    if (it == summary.final_by_phase.end()) continue;
    const CurveSummary::Final& last = it->second;
    out += "  " + std::string(phase) + " (epoch " + std::to_string(last.epoch) +
           "): loss " + fixed(last.loss, 3) + ", acc " + fixed(last.acc, 3) +
           ", bleu " + fixed(last.bleu, 3) + ", rouge_l " + fixed(last.rouge_l, 3) +
           "\n";
  }
  if (!summary.max_val_train_gap.empty()) {
    out += "Largest val-train gaps:\n";
    for (const char* metric : {"loss", "acc", "bleu", "rouge_l"}) {
      auto it = summary.max_val_train_gap.find(metric);
      if (it == summary.max_val_train_gap.end()) continue;
      out += "  " + std::string(metric) + ": " + fixed(it->second, 3) + " (epoch " +
             std::to_string(summary.max_gap_epoch.at(metric)) + ")\n";
    }
  }
  return out;
}

}  // namespace ruledeck

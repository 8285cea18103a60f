// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RULEDECK_REPORT_HPP_
#define RULEDECK_REPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ruledeck {

struct PhaseMetrics {
  double acc = 0.0;
  double bleu = 0.0;
  double rouge_l = 0.0;
};

struct ModelMetrics {
  std::string label;
  std::map<std::string, PhaseMetrics> phases;  // keys among train/val/test
};

struct Improvement {
  std::string label;
  std::string phase;
  double percent = 0.0;  // relative accuracy improvement over the baseline
};

struct GapAnalysis {
  std::string label;
  std::optional<double> train_test_gap;  // train acc - test acc, points
  std::optional<double> val_test_gap;    // val acc - test acc, points
};

// Derived rows are always recomputed from the input accuracies.
struct ComparisonReport {
  std::vector<ModelMetrics> models;
  std::optional<std::string> baseline;
  std::vector<Improvement> improvements;
  std::vector<GapAnalysis> gaps;
};

// Reads either a scoring report ({n, corpus: {...}, ...}, treated as the test
// phase) or a phase-labeled file ({train: {acc, bleu, rouge_l}, ...}).
// Throws on unknown phase names or unreadable files.
ModelMetrics load_metrics_file(const std::string& label, const std::string& path);

// Computes per-phase relative improvements against the baseline label (which
// must exist and expose the same phases as each compared model) plus
// train-test and val-test accuracy gaps for every model.
ComparisonReport build_comparison(const std::vector<ModelMetrics>& models,
                                  const std::optional<std::string>& baseline);

std::string comparison_text(const ComparisonReport& report);

// Learning-curve summaries from CSV rows (epoch, phase, loss, acc, bleu,
// rouge_l): the last row per phase plus the largest val-train gap per metric.
struct CurveSummary {
  struct Final {
    int epoch = 0;
    double loss = 0.0;
    double acc = 0.0;
    double bleu = 0.0;
    double rouge_l = 0.0;
  };
  std::map<std::string, Final> final_by_phase;
  std::map<std::string, double> max_val_train_gap;  // metric -> max |val - train|
  std::map<std::string, int> max_gap_epoch;         // metric -> epoch of that max
};

CurveSummary summarize_curves(const std::string& csv_text);
std::string curves_text(const CurveSummary& summary);

}  // namespace ruledeck

#endif  // RULEDECK_REPORT_HPP_

// Copyright 2026 The ruledeck Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "ruledeck/config.hpp"
#include "ruledeck/report.hpp"

namespace {

using namespace ruledeck;

// Writes text to path; callers remove the file when done.
void write_file(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

ModelMetrics model(std::string label, std::optional<PhaseMetrics> train,
                   std::optional<PhaseMetrics> val, std::optional<PhaseMetrics> test) {
  ModelMetrics m;
  m.label = std::move(label);
  if (train) m.phases["train"] = *train;
  if (val) m.phases["val"] = *val;
  if (test) m.phases["test"] = *test;
  return m;
}

// Published fine-tuning accuracies for the three encoder-decoder models,
// without and with structural guidance.
ModelMetrics codet5_base() {
  return model("codet5-base", PhaseMetrics{86.729, 0.989, 0.994},
               PhaseMetrics{50.995, 0.725, 0.801}, PhaseMetrics{57.211, 0.763, 0.828});
}

ModelMetrics codet5_ast() {
  return model("codet5-ast", PhaseMetrics{86.003, 0.992, 0.995},
               PhaseMetrics{63.796, 0.876, 0.916}, PhaseMetrics{62.879, 0.840, 0.898});
}

const Improvement* find_improvement(const ComparisonReport& report,
                                    const std::string& label, const std::string& phase) {
  for (const Improvement& row : report.improvements)
    if (row.label == label && row.phase == phase) return &row;
  return nullptr;
}

const GapAnalysis* find_gap(const ComparisonReport& report, const std::string& label) {
  for (const GapAnalysis& row : report.gaps)
    if (row.label == label) return &row;
  return nullptr;
}

const char* kCurveHeader = "epoch,phase,loss,acc,bleu,rouge_l\n";

std::string three_epoch_curves() {
  return std::string(kCurveHeader) +
         "1,train,1.2,40.0,0.50,0.60\n"
         "1,val,1.5,35.0,0.45,0.55\n"
         "2,train,0.8,60.0,0.70,0.75\n"
         "2,val,1.3,50.0,0.60,0.65\n"
         "3,train,0.5,80.0,0.90,0.92\n"
         "3,val,0.9,55.0,0.63,0.70\n"
         "3,test,0.7,58.0,0.66,0.72\n";
}

}  // namespace

TEST_SUITE("metrics files") {
  TEST_CASE("a scoring report maps onto the test phase") {
    const std::string path = "report_corpus_test.json";
    write_file(path,
               R"({"n": 50, "corpus": {"ast_weighted": 62.879, "bleu": 0.84, )"
               R"("rouge_l": 0.898}})");
    ModelMetrics loaded = load_metrics_file("codet5-ast", path);
    std::remove(path.c_str());

    CHECK(loaded.label == "codet5-ast");
    REQUIRE(loaded.phases.size() == 1);
    REQUIRE(loaded.phases.count("test") == 1);
    CHECK(loaded.phases["test"].acc == doctest::Approx(62.879));
    CHECK(loaded.phases["test"].bleu == doctest::Approx(0.84));
    CHECK(loaded.phases["test"].rouge_l == doctest::Approx(0.898));
  }

  TEST_CASE("phase-labeled files load every named phase") {
    const std::string path = "report_phases_test.json";
    write_file(path,
               R"({"train": {"acc": 86.003, "bleu": 0.992, "rouge_l": 0.995},)"
               R"( "val": {"acc": 63.796},)"
               R"( "test": {"acc": 62.879, "bleu": 0.84, "rouge_l": 0.898}})");
    ModelMetrics loaded = load_metrics_file("codet5-ast", path);
    std::remove(path.c_str());

    REQUIRE(loaded.phases.size() == 3);
    CHECK(loaded.phases["train"].acc == doctest::Approx(86.003));
    CHECK(loaded.phases["train"].rouge_l == doctest::Approx(0.995));
    CHECK(loaded.phases["val"].acc == doctest::Approx(63.796));
    // bleu and rouge_l default to zero when a phase omits them.
    CHECK(loaded.phases["val"].bleu == 0.0);
    CHECK(loaded.phases["val"].rouge_l == 0.0);
    CHECK(loaded.phases["test"].acc == doctest::Approx(62.879));
  }

  TEST_CASE("unknown phase names are rejected") {
    const std::string path = "report_badphase_test.json";
    write_file(path, R"({"zero": {"acc": 1.0}})");
    CHECK_THROWS_WITH_AS(load_metrics_file("m", path),
                         doctest::Contains("unknown phase zero"), std::runtime_error);
    std::remove(path.c_str());
  }

  TEST_CASE("a phase without an acc field is rejected") {
    const std::string path = "report_noacc_test.json";
    write_file(path, R"({"train": {"bleu": 0.5}})");
    CHECK_THROWS_WITH_AS(load_metrics_file("m", path),
                         doctest::Contains("phase train needs an acc field"),
                         std::runtime_error);
    std::remove(path.c_str());
  }

  TEST_CASE("an empty object yields no phases") {
    const std::string path = "report_empty_test.json";
    write_file(path, "{}");
    CHECK_THROWS_WITH_AS(load_metrics_file("m", path),
                         doctest::Contains("no phases found"), std::runtime_error);
    std::remove(path.c_str());
  }

  TEST_CASE("non-object documents are rejected") {
    const std::string path = "report_array_test.json";
    write_file(path, "[1, 2]");
    CHECK_THROWS_WITH_AS(load_metrics_file("m", path),
                         doctest::Contains("expected a JSON object"), std::runtime_error);
    std::remove(path.c_str());
  }

  TEST_CASE("a missing file reports its path") {
    CHECK_THROWS_WITH_AS(load_metrics_file("m", "no_such_metrics_file.json"),
                         doctest::Contains("cannot open no_such_metrics_file.json"),
                         std::runtime_error);
  }
}

TEST_SUITE("model comparison") {
  TEST_CASE("improvements and gaps match the published fine-tuning results") {
    ComparisonReport report =
        build_comparison({codet5_base(), codet5_ast()}, std::string("codet5-base"));

    const Improvement* val = find_improvement(report, "codet5-ast", "val");
    const Improvement* test = find_improvement(report, "codet5-ast", "test");
    REQUIRE(val != nullptr);
    REQUIRE(test != nullptr);
    CHECK(std::abs(val->percent - 25.1) <= 0.05);
    CHECK(std::abs(test->percent - 9.9) <= 0.05);

    const GapAnalysis* base_gap = find_gap(report, "codet5-base");
    const GapAnalysis* ast_gap = find_gap(report, "codet5-ast");
    REQUIRE(base_gap != nullptr);
    REQUIRE(ast_gap != nullptr);
    REQUIRE(base_gap->train_test_gap.has_value());
    REQUIRE(ast_gap->train_test_gap.has_value());
    REQUIRE(ast_gap->val_test_gap.has_value());
    CHECK(std::abs(*base_gap->train_test_gap - 29.518) < 1e-9);
    CHECK(std::abs(*ast_gap->train_test_gap - 23.124) < 1e-9);
    CHECK(std::abs(*ast_gap->val_test_gap - 0.917) < 1e-9);
  }

  TEST_CASE("every published validation and test improvement reproduces") {
    struct Case {
      double baseline, improved, expected;
    };
    const Case cases[] = {
        {39.083, 51.796, 32.5}, {50.289, 56.042, 11.4}, {37.271, 51.519, 38.2},
        {46.407, 58.947, 27.0}, {50.995, 63.796, 25.1}, {57.211, 62.879, 9.9},
    };
    for (const Case& c : cases) {
      ModelMetrics base = model("base", std::nullopt, std::nullopt,
                                PhaseMetrics{c.baseline, 0.0, 0.0});
      ModelMetrics tuned = model("tuned", std::nullopt, std::nullopt,
                                 PhaseMetrics{c.improved, 0.0, 0.0});
      ComparisonReport report = build_comparison({base, tuned}, std::string("base"));
      const Improvement* row = find_improvement(report, "tuned", "test");
      REQUIRE(row != nullptr);
      CHECK(std::abs(row->percent - c.expected) <= 0.05);
    }
  }

  TEST_CASE("without a baseline only gaps are derived") {
    ComparisonReport report = build_comparison({codet5_ast()}, std::nullopt);
    CHECK(report.improvements.empty());
    REQUIRE(report.gaps.size() == 1);
    CHECK(report.gaps[0].train_test_gap.has_value());
  }

  TEST_CASE("gaps are omitted when a phase is missing") {
    ModelMetrics no_test = model("m", PhaseMetrics{80.0, 0, 0},
                                 PhaseMetrics{60.0, 0, 0}, std::nullopt);
    ComparisonReport report = build_comparison({no_test}, std::nullopt);
    REQUIRE(report.gaps.size() == 1);
    CHECK_FALSE(report.gaps[0].train_test_gap.has_value());
    CHECK_FALSE(report.gaps[0].val_test_gap.has_value());
  }

  TEST_CASE("a phase present on one side only is an error") {
    ModelMetrics base = model("base", std::nullopt, std::nullopt,
                              PhaseMetrics{50.0, 0, 0});
    ModelMetrics tuned = model("tuned", PhaseMetrics{80.0, 0, 0}, std::nullopt,
                               PhaseMetrics{60.0, 0, 0});
    CHECK_THROWS_WITH_AS(build_comparison({base, tuned}, std::string("base")),
                         doctest::Contains("phase train not present for both"),
                         std::runtime_error);
  }

  TEST_CASE("a phase missing from both sides is skipped") {
    ModelMetrics base = model("base", std::nullopt, PhaseMetrics{40.0, 0, 0},
                              PhaseMetrics{50.0, 0, 0});
    ModelMetrics tuned = model("tuned", std::nullopt, PhaseMetrics{44.0, 0, 0},
                               PhaseMetrics{60.0, 0, 0});
    ComparisonReport report = build_comparison({base, tuned}, std::string("base"));
    CHECK(report.improvements.size() == 2);
    CHECK(find_improvement(report, "tuned", "train") == nullptr);
  }

  TEST_CASE("an unknown baseline label is an error") {
    CHECK_THROWS_WITH_AS(build_comparison({codet5_ast()}, std::string("missing")),
                         doctest::Contains("baseline label missing not found"),
                         std::runtime_error);
  }
}

TEST_SUITE("comparison rendering") {
  TEST_CASE("the table lists accuracies, improvements, and gaps") {
    ComparisonReport report =
        build_comparison({codet5_base(), codet5_ast()}, std::string("codet5-base"));
    std::string text = comparison_text(report);

    CHECK(text.find("Model") != std::string::npos);
    CHECK(text.find("Phase") != std::string::npos);
    CHECK(text.find("ROUGE-L") != std::string::npos);
    CHECK(text.find("codet5-ast") != std::string::npos);
    CHECK(text.find("62.879") != std::string::npos);
    CHECK(text.find("0.840") != std::string::npos);

    CHECK(text.find("Relative accuracy improvement over codet5-base:\n") !=
          std::string::npos);
    CHECK(text.find("codet5-ast val: 25.1%") != std::string::npos);
    CHECK(text.find("codet5-ast test: 9.9%") != std::string::npos);

    CHECK(text.find("Accuracy gaps (percentage points):\n") != std::string::npos);
    CHECK(text.find("codet5-base: train-test 29.518") != std::string::npos);
    CHECK(text.find("codet5-ast: train-test 23.124, val-test 0.917") !=
          std::string::npos);
  }

  TEST_CASE("without a baseline the improvement section is absent") {
    ComparisonReport report = build_comparison({codet5_ast()}, std::nullopt);
    std::string text = comparison_text(report);
    CHECK(text.find("Relative accuracy improvement") == std::string::npos);
    CHECK(text.find("Accuracy gaps") != std::string::npos);
  }
}

TEST_SUITE("curve summaries") {
  TEST_CASE("final rows and maximum gaps are extracted") {
    CurveSummary summary = summarize_curves(three_epoch_curves());

    REQUIRE(summary.final_by_phase.size() == 3);
    const CurveSummary::Final& train = summary.final_by_phase.at("train");
    CHECK(train.epoch == 3);
    CHECK(train.loss == doctest::Approx(0.5));
    CHECK(train.acc == doctest::Approx(80.0));
    const CurveSummary::Final& val = summary.final_by_phase.at("val");
    CHECK(val.epoch == 3);
    CHECK(val.acc == doctest::Approx(55.0));
    const CurveSummary::Final& test = summary.final_by_phase.at("test");
    CHECK(test.epoch == 3);
    CHECK(test.acc == doctest::Approx(58.0));

    // The loss gap peaks at epoch 2, every other metric at epoch 3.
    CHECK(summary.max_val_train_gap.at("loss") == doctest::Approx(0.5));
    CHECK(summary.max_gap_epoch.at("loss") == 2);
    CHECK(summary.max_val_train_gap.at("acc") == doctest::Approx(25.0));
    CHECK(summary.max_gap_epoch.at("acc") == 3);
    CHECK(summary.max_val_train_gap.at("bleu") == doctest::Approx(0.27));
    CHECK(summary.max_gap_epoch.at("bleu") == 3);
    CHECK(summary.max_val_train_gap.at("rouge_l") == doctest::Approx(0.22));
    CHECK(summary.max_gap_epoch.at("rouge_l") == 3);
  }

  TEST_CASE("the last row wins for a repeated epoch") {
    std::string csv = std::string(kCurveHeader) +
                      "5,train,1.0,10.0,0.1,0.1\n"
                      "5,train,0.9,20.0,0.2,0.3\n";
    CurveSummary summary = summarize_curves(csv);
    CHECK(summary.final_by_phase.at("train").acc == doctest::Approx(20.0));
  }

  TEST_CASE("an earlier line with a later epoch stays final") {
    std::string csv = std::string(kCurveHeader) +
                      "7,train,0.2,90.0,0.9,0.9\n"
                      "6,train,0.4,70.0,0.7,0.7\n";
    CurveSummary summary = summarize_curves(csv);
    CHECK(summary.final_by_phase.at("train").epoch == 7);
    CHECK(summary.final_by_phase.at("train").acc == doctest::Approx(90.0));
  }

  TEST_CASE("gaps only count epochs present for both phases") {
    std::string csv = std::string(kCurveHeader) +
                      "1,train,1.0,40.0,0.4,0.4\n"
                      "1,val,1.2,30.0,0.3,0.3\n"
                      "2,val,1.1,90.0,0.9,0.9\n";
    CurveSummary summary = summarize_curves(csv);
    CHECK(summary.max_val_train_gap.at("acc") == doctest::Approx(10.0));
    CHECK(summary.max_gap_epoch.at("acc") == 1);
  }

  TEST_CASE("a single-phase file has no gap section") {
    std::string csv = std::string(kCurveHeader) + "1,train,1.0,40.0,0.4,0.4\n";
    CurveSummary summary = summarize_curves(csv);
    CHECK(summary.max_val_train_gap.empty());
    std::string text = curves_text(summary);
    CHECK(text.find("Largest val-train gaps") == std::string::npos);
  }

  TEST_CASE("blank lines and CRLF endings are tolerated") {
    std::string csv = "epoch,phase,loss,acc,bleu,rouge_l\r\n"
                      "1,train,1.0,40.0,0.4,0.4\r\n"
                      "\r\n"
                      "2,train,0.5,60.0,0.6,0.6\r\n";
    CurveSummary summary = summarize_curves(csv);
    CHECK(summary.final_by_phase.at("train").epoch == 2);
  }

  TEST_CASE("error messages carry line numbers") {
    CHECK_THROWS_WITH_AS(summarize_curves(""), "empty curve file", std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves("epoch,phase,loss\n"),
                         "curve header must be epoch,phase,loss,acc,bleu,rouge_l",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves(std::string(kCurveHeader) + "1,train,0.5\n"),
                         "line 2: expected 6 fields", std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves(std::string(kCurveHeader) +
                                          "1,zero,1,1,1,1\n"),
                         "line 2: unknown phase zero", std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves(std::string(kCurveHeader) +
                                          "x,train,1,1,1,1\n"),
                         "line 2: malformed number", std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves(std::string(kCurveHeader) + "\n" +
                                          "1,train,abc,1,1,1\n"),
                         "line 3: malformed number", std::runtime_error);
    CHECK_THROWS_WITH_AS(summarize_curves(kCurveHeader), "no curve rows",
                         std::runtime_error);
  }

  TEST_CASE("the text rendering lists phases then gaps in a fixed order") {
    CurveSummary summary = summarize_curves(three_epoch_curves());
    std::string text = curves_text(summary);

    std::string expected =
        "Final values per phase:\n"
        "  train (epoch 3): loss 0.500, acc 80.000, bleu 0.900, rouge_l 0.920\n"
        "  val (epoch 3): loss 0.900, acc 55.000, bleu 0.630, rouge_l 0.700\n"
        "  test (epoch 3): loss 0.700, acc 58.000, bleu 0.660, rouge_l 0.720\n"
        "Largest val-train gaps:\n"
        "  loss: 0.500 (epoch 2)\n"
        "  acc: 25.000 (epoch 3)\n"
        "  bleu: 0.270 (epoch 3)\n"
        "  rouge_l: 0.220 (epoch 3)\n";
    CHECK(text == expected);
  }
}

TEST_SUITE("configuration") {
  TEST_CASE("defaults survive an empty config") {
    RunConfig config = parse_config("", "cfg");
    CHECK(config.registry_path.empty());
    CHECK(config.alpha == doctest::Approx(0.6));
    CHECK(config.k == 3);
    CHECK_FALSE(config.strict);
    CHECK(config.seed == 0);
    CHECK(config.profile.w1 == doctest::Approx(0.4));
    CHECK(config.profile.w2 == doctest::Approx(0.2));
    CHECK(config.profile.w3 == doctest::Approx(0.4));
    CHECK(config.class_weights.command == doctest::Approx(3.0));
  }

  TEST_CASE("every key is honored and comments are stripped") {
    const char* text =
        "# defaults for the smoke corpus\n"
        "registry = custom.cfg\n"
        "w1 = 0.5\n"
        "w2 = 0.25  # trailing comment\n"
        "w3 = 0.25\n"
        "weight.command = 4\n"
        "weight.layer = 3\n"
        "weight.condition = 2.5\n"
        "weight.option = 1.5\n"
        "weight.structure = 2\n"
        "alpha = 0.75\n"
        "k = 5\n"
        "strict = true\n"
        "seed = 42\n";
    RunConfig config = parse_config(text, "cfg");
    CHECK(config.registry_path == "custom.cfg");
    CHECK(config.profile.w1 == doctest::Approx(0.5));
    CHECK(config.profile.w2 == doctest::Approx(0.25));
    CHECK(config.profile.w3 == doctest::Approx(0.25));
    CHECK(config.class_weights.command == doctest::Approx(4.0));
    CHECK(config.class_weights.layer == doctest::Approx(3.0));
    CHECK(config.class_weights.condition == doctest::Approx(2.5));
    CHECK(config.class_weights.option == doctest::Approx(1.5));
    CHECK(config.class_weights.structure == doctest::Approx(2.0));
    CHECK(config.alpha == doctest::Approx(0.75));
    CHECK(config.k == 5);
    CHECK(config.strict);
    CHECK(config.seed == 42);
  }

  TEST_CASE("unknown keys and malformed lines are rejected with positions") {
    CHECK_THROWS_WITH_AS(parse_config("bogus = 1\n", "cfg"),
                         doctest::Contains("cfg: line 1: unknown key bogus"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("\n\nalpha 0.5\n", "cfg"),
                         doctest::Contains("cfg: line 3: expected key=value"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("alpha = high\n", "cfg"),
                         doctest::Contains("expected a number, got 'high'"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("k = 2.5\n", "cfg"),
                         doctest::Contains("k must be a positive integer"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("k = 0\n", "cfg"),
                         doctest::Contains("k must be a positive integer"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("strict = yes\n", "cfg"),
                         doctest::Contains("strict must be true or false"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("seed = soon\n", "cfg"),
                         doctest::Contains("seed must be a non-negative integer"),
                         std::runtime_error);
  }

  TEST_CASE("constraint violations are rejected after parsing") {
    CHECK_THROWS_WITH_AS(parse_config("w1 = 0.9\n", "cfg"),
                         doctest::Contains("w1+w2+w3 must sum to 1"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("weight.option = 9\n", "cfg"),
                         doctest::Contains("class weights must be positive"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("alpha = 1.5\n", "cfg"),
                         doctest::Contains("alpha must lie in [0,1]"),
                         std::runtime_error);
  }

  TEST_CASE("load_config reads from disk and names the file in errors") {
    const std::string path = "run_config_test.cfg";
    write_file(path, "alpha = 0.3\nk = 7\n");
    RunConfig config = load_config(path);
    std::remove(path.c_str());
    CHECK(config.alpha == doctest::Approx(0.3));
    CHECK(config.k == 7);

    CHECK_THROWS_WITH_AS(load_config("no_such_config_file.cfg"),
                         doctest::Contains("cannot open no_such_config_file.cfg"),
                         std::runtime_error);
  }

  TEST_CASE("the environment variable selects a config path") {
    REQUIRE(setenv("RULEDECK_CONFIG", "from_env.cfg", 1) == 0);
    std::optional<std::string> path = env_config_path();
    REQUIRE(path.has_value());
    CHECK(*path == "from_env.cfg");

    REQUIRE(setenv("RULEDECK_CONFIG", "", 1) == 0);
    CHECK_FALSE(env_config_path().has_value());

    REQUIRE(unsetenv("RULEDECK_CONFIG") == 0);
    CHECK_FALSE(env_config_path().has_value());
  }
}

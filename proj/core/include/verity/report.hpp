#pragma once

#include "verity/calibration.hpp"
#include "verity/metrics.hpp"
#include "verity/model.hpp"
#include "verity/statement.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace verity {

// One manifest entry. A relative path resolves against the manifest's
// directory.
struct BenchmarkSpec {
    std::string name;
    std::filesystem::path path;
    GroupKind kind = GroupKind::multiple_choice;
    bool balanced = false;
};

// Parses a benchmark manifest: either a JSON array of {name, path, kind,
// balanced} objects or an object with such an array under "benchmarks".
std::vector<BenchmarkSpec> load_manifest(const std::filesystem::path& path);

// Scored groups plus the flat score/label views the rank metrics consume.
struct BenchmarkEvaluation {
    BenchmarkMetrics metrics;
    std::vector<ScoredGroup> groups;
    std::vector<double> scores;
    std::vector<int> labels;
};

// Scores every statement and computes the applicable metrics. All groups must
// match spec.kind (WrongKind otherwise). acc_mc is set for multiple-choice
// benchmarks, acc_bool only for boolean benchmarks declared balanced;
// auroc/ap/ece always.
BenchmarkEvaluation evaluate_benchmark(const VerifierModel& model,
                                       const BenchmarkSpec& spec,
                                       std::span<const StatementGroup> groups,
                                       const CalibrationConfig& ece_config);

struct EvaluationReport {
    std::vector<BenchmarkMetrics> benchmarks;
    // Unweighted means over benchmarks; a metric appears only when every
    // benchmark carries it.
    std::map<std::string, double> macro;
    double temperature = 1.0;
    CalibrationConfig ece_config;
};

// Loads each manifest entry, evaluates it, and aggregates. When detail is
// non-null the per-benchmark scored data is appended there in manifest order.
EvaluationReport evaluate_manifest(const VerifierModel& model,
                                   const std::filesystem::path& manifest_path,
                                   const CalibrationConfig& ece_config,
                                   std::vector<BenchmarkEvaluation>* detail = nullptr);

// JSON document with per-benchmark metrics, macro averages, and the metric
// conventions in force (tie handling, curve interpolation, binning,
// temperature). No timestamps: identical inputs give identical bytes.
std::string report_to_json(const EvaluationReport& report);

// Aligned plain-text table, one row per benchmark plus a macro row.
std::string report_to_table(const EvaluationReport& report);

// Inverse of report_to_json.
EvaluationReport report_from_json(const std::string& text, const std::string& name);
EvaluationReport load_report(const std::filesystem::path& path);

// Writes <name>_roc.csv, <name>_pr.csv, and <name>_reliability.csv for one
// evaluated benchmark into dir (created if missing).
void write_curve_files(const BenchmarkEvaluation& evaluation,
                       const std::filesystem::path& dir,
                       const CalibrationConfig& ece_config);

}  // namespace verity

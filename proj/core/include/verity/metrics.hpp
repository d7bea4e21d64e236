#pragma once

#include "verity/statement.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verity {

// One evaluated group: the source group's identity plus per-statement scores.
struct ScoredGroup {
    std::string group_id;
    GroupKind kind = GroupKind::multiple_choice;
    std::vector<ScoredStatement> statements;
};

struct McAccuracy {
    double accuracy = 0.0;
    // Groups where the maximum score is attained by more than one statement.
    // Ties resolve to the lowest within-group index and are counted here so
    // their influence stays auditable.
    std::size_t tied_groups = 0;
};

// Per-benchmark metric bundle. acc_mc applies to multiple-choice benchmarks,
// acc_bool to boolean benchmarks declared balanced; auroc/ap/ece are always
// present.
struct BenchmarkMetrics {
    std::string name;
    GroupKind kind = GroupKind::multiple_choice;
    bool balanced = false;
    std::optional<double> acc_mc;
    std::optional<double> acc_bool;
    std::size_t tied_groups = 0;
    double auroc = 0.0;
    double ap = 0.0;
    double ece = 0.0;
    std::size_t n_groups = 0;
    std::size_t n_statements = 0;
};

// Fraction of multiple-choice groups whose correct statement attains the
// maximum score, lowest index winning ties. Throws WrongKind on a boolean
// group, EmptyInput when no groups are given, InvalidGroup when a group lacks
// a unique correct statement.
McAccuracy accuracy_mc(std::span<const ScoredGroup> groups);

// Fraction of statements where (logit > 0) matches the label; a zero logit
// predicts false. Throws EmptyInput.
double accuracy_bool(std::span<const ScoredStatement> statements);

// Probability that a uniformly random positive outranks a uniformly random
// negative, ties counted 1/2. Throws DegenerateLabels when either class is
// absent, EmptyInput on no data.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Mean over positives, in score-descending order (ties keep input order), of
// precision at each positive's rank. Throws DegenerateLabels when no positive
// exists, EmptyInput on no data.
double average_precision(std::span<const double> scores, std::span<const int> labels);

// Unweighted mean of one metric across benchmark results. Throws MissingMetric
// when any result lacks the metric, EmptyInput on an empty sequence. Metric
// names: acc_mc, acc_bool, auroc, ap, ece.
double macro_average(std::span<const BenchmarkMetrics> results, std::string_view metric);

// (false positive rate, true positive rate) point of a ROC curve.
struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

// (recall, precision) point of a precision/recall curve.
struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

// Step-interpolated ROC points from (0,0) to (1,1), one step per distinct
// score level. Same preconditions as auroc.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

// Precision/recall points at every rank in score-descending order (stable
// ties), starting from (0,1). Same preconditions as average_precision.
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels);

}  // namespace verity

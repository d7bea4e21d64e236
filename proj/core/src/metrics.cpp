#include "verity/metrics.hpp"

#include "verity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace verity {
namespace {

void check_pairs(std::span<const double> scores, std::span<const int> labels,
                 const char* who) {
    if (scores.empty()) {
        throw EmptyInput(std::string(who) + ": no statements");
    }
    if (scores.size() != labels.size()) {
        throw InvalidArgument(std::string(who) + ": scores and labels differ in length");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw InvalidArgument(std::string(who) + ": non-finite score");
        }
    }
    for (int y : labels) {
        if (y != 0 && y != 1) {
            throw InvalidArgument(std::string(who) + ": labels must be 0 or 1");
        }
    }
}

std::size_t count_positives(std::span<const int> labels) {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

// Indices in score-descending order, ties keeping input order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

McAccuracy accuracy_mc(std::span<const ScoredGroup> groups) {
    if (groups.empty()) {
        throw EmptyInput("accuracy_mc: no groups");
    }
    std::size_t correct = 0;
    std::size_t tied = 0;
    for (const ScoredGroup& group : groups) {
        if (group.kind != GroupKind::multiple_choice) {
            throw WrongKind("accuracy_mc: group '" + group.group_id +
                            "' is not multiple_choice");
        }
        if (group.statements.size() < 2) {
            throw InvalidGroup("accuracy_mc: group '" + group.group_id +
                               "' has fewer than two statements");
        }
        std::size_t gold = group.statements.size();
        for (std::size_t c = 0; c < group.statements.size(); ++c) {
            if (group.statements[c].statement.label) {
                if (gold != group.statements.size()) {
                    throw InvalidGroup("accuracy_mc: group '" + group.group_id +
                                       "' has more than one correct statement");
                }
                gold = c;
            }
        }
        if (gold == group.statements.size()) {
            throw InvalidGroup("accuracy_mc: group '" + group.group_id +
                               "' has no correct statement");
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < group.statements.size(); ++c) {
            if (group.statements[c].score > group.statements[best].score) {
                best = c;
            }
        }
        std::size_t at_max = 0;
        for (const ScoredStatement& s : group.statements) {
            if (s.score == group.statements[best].score) {
                ++at_max;
            }
        }
        if (at_max > 1) {
            ++tied;
        }
        if (best == gold) {
            ++correct;
        }
    }
    McAccuracy out;
    out.accuracy = static_cast<double>(correct) / static_cast<double>(groups.size());
    out.tied_groups = tied;
    return out;
}

double accuracy_bool(std::span<const ScoredStatement> statements) {
    if (statements.empty()) {
        throw EmptyInput("accuracy_bool: no statements");
    }
    std::size_t correct = 0;
    for (const ScoredStatement& s : statements) {
        bool predicted = s.logit > 0.0;
        if (predicted == s.statement.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(statements.size());
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
    check_pairs(scores, labels, "auroc");
    std::size_t n_pos = count_positives(labels);
    std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DegenerateLabels("auroc: needs at least one positive and one negative");
    }

    // Midrank formulation of pair counting: with 1-based ranks over ascending
    // scores (tied runs sharing their average rank), the concordant-pair count
    // with ties at 1/2 is sum(ranks of positives) - n_pos(n_pos+1)/2.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            ++j;
        }
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                positive_rank_sum += midrank;
            }
        }
        i = j;
    }

    double np = static_cast<double>(n_pos);
    double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
    check_pairs(scores, labels, "average_precision");
    std::size_t n_pos = count_positives(labels);
    if (n_pos == 0) {
        throw DegenerateLabels("average_precision: no positive labels");
    }
    std::vector<std::size_t> order = descending_order(scores);
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t rank = 1; rank <= order.size(); ++rank) {
        if (labels[order[rank - 1]] == 1) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(rank);
        }
    }
    return sum / static_cast<double>(n_pos);
}

double macro_average(std::span<const BenchmarkMetrics> results, std::string_view metric) {
    if (results.empty()) {
        throw EmptyInput("macro_average: no benchmark results");
    }
    double sum = 0.0;
    for (const BenchmarkMetrics& r : results) {
        double value = 0.0;
        if (metric == "acc_mc") {
            if (!r.acc_mc) {
                throw MissingMetric("macro_average: benchmark '" + r.name +
                                    "' has no acc_mc");
            }
            value = *r.acc_mc;
        } else if (metric == "acc_bool") {
            if (!r.acc_bool) {
                throw MissingMetric("macro_average: benchmark '" + r.name +
                                    "' has no acc_bool");
            }
            value = *r.acc_bool;
        } else if (metric == "auroc") {
            value = r.auroc;
        } else if (metric == "ap") {
            value = r.ap;
        } else if (metric == "ece") {
            value = r.ece;
        } else {
            throw InvalidArgument("macro_average: unknown metric '" + std::string(metric) +
                                  "'");
        }
        sum += value;
    }
    return sum / static_cast<double>(results.size());
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
    check_pairs(scores, labels, "roc_curve");
    std::size_t n_pos = count_positives(labels);
    std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DegenerateLabels("roc_curve: needs at least one positive and one negative");
    }
    std::vector<std::size_t> order = descending_order(scores);
    std::vector<RocPoint> points;
    points.push_back({0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] == 1) {
                ++tp;
            } else {
                ++fp;
            }
            ++j;
        }
        points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                          static_cast<double>(tp) / static_cast<double>(n_pos)});
        i = j;
    }
    return points;
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> labels) {
    check_pairs(scores, labels, "pr_curve");
    std::size_t n_pos = count_positives(labels);
    if (n_pos == 0) {
        throw DegenerateLabels("pr_curve: no positive labels");
    }
    std::vector<std::size_t> order = descending_order(scores);
    std::vector<PrPoint> points;
    points.push_back({0.0, 1.0});
    std::size_t hits = 0;
    for (std::size_t rank = 1; rank <= order.size(); ++rank) {
        if (labels[order[rank - 1]] == 1) {
            ++hits;
        }
        points.push_back({static_cast<double>(hits) / static_cast<double>(n_pos),
                          static_cast<double>(hits) / static_cast<double>(rank)});
    }
    return points;
}

}  // namespace verity

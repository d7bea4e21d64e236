#include "verity/calibration.hpp"

#include "verity/errors.hpp"
#include "verity/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace verity {

namespace {

void check_input(std::span<const double> scores, std::span<const int> labels, bool unit_range) {
    if (scores.empty()) throw EmptyInput("no scored statements");
    if (scores.size() != labels.size()) {
        throw InvalidArgument("scores and labels differ in length");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw InvalidArgument("score is not finite");
        if (unit_range && (s < 0.0 || s > 1.0)) {
            throw InvalidArgument("score outside [0, 1]");
        }
    }
    for (int y : labels) {
        if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
    }
}

// Bin assignment for every point; bins may be empty.
std::vector<std::vector<std::size_t>> assign_bins(std::span<const double> scores,
                                                  const CalibrationConfig& config) {
    const std::size_t m = config.bins;
    std::vector<std::vector<std::size_t>> bins(m);
    if (config.binning == Binning::equal_width) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            auto b = static_cast<std::size_t>(scores[i] * static_cast<double>(m));
            if (b >= m) b = m - 1;
            bins[b].push_back(i);
        }
        return bins;
    }
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    const std::size_t base = scores.size() / m;
    const std::size_t extra = scores.size() % m;
    std::size_t cursor = 0;
    for (std::size_t b = 0; b < m; ++b) {
        std::size_t size = base + (b < extra ? 1 : 0);
        for (std::size_t j = 0; j < size; ++j) bins[b].push_back(order[cursor++]);
    }
    return bins;
}

} // namespace

const char* to_string(Binning binning) {
    return binning == Binning::equal_width ? "equal_width" : "equal_mass";
}

Binning binning_from_string(std::string_view text) {
    if (text == "equal_width") return Binning::equal_width;
    if (text == "equal_mass") return Binning::equal_mass;
    throw InvalidArgument("unknown binning: " + std::string(text));
}

double compute_ece(std::span<const double> scores, std::span<const int> labels,
                   const CalibrationConfig& config) {
    if (config.bins < 1) throw InvalidArgument("bin count must be >= 1");
    check_input(scores, labels, true);
    const double n = static_cast<double>(scores.size());
    double ece = 0.0;
    for (const auto& bin : assign_bins(scores, config)) {
        if (bin.empty()) continue;
        double score_sum = 0.0;
        double label_sum = 0.0;
        for (std::size_t i : bin) {
            score_sum += scores[i];
            label_sum += labels[i];
        }
        double count = static_cast<double>(bin.size());
        ece += (count / n) * std::abs(label_sum / count - score_sum / count);
    }
    return ece;
}

std::vector<ReliabilityRow> reliability_curve(std::span<const double> scores,
                                              std::span<const int> labels,
                                              const CalibrationConfig& config) {
    if (config.bins < 1) throw InvalidArgument("bin count must be >= 1");
    check_input(scores, labels, true);
    std::vector<ReliabilityRow> rows;
    const std::size_t m = config.bins;
    auto bins = assign_bins(scores, config);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        if (bins[b].empty()) continue;
        ReliabilityRow row;
        double lo = 2.0;
        double hi = -1.0;
        for (std::size_t i : bins[b]) {
            row.mean_score += scores[i];
            row.accuracy += labels[i];
            lo = std::min(lo, scores[i]);
            hi = std::max(hi, scores[i]);
        }
        row.count = bins[b].size();
        row.mean_score /= static_cast<double>(row.count);
        row.accuracy /= static_cast<double>(row.count);
        row.bin_center = config.binning == Binning::equal_width
                             ? (static_cast<double>(b) + 0.5) / static_cast<double>(m)
                             : (lo + hi) / 2.0;
        rows.push_back(row);
    }
    return rows;
}

CalibrationArtifact fit_temperature(std::span<const double> logits, std::span<const int> labels,
                                    const CalibrationConfig& config,
                                    const std::string& fitted_on) {
    check_input(logits, labels, false);
    if (config.bins < 1) throw InvalidArgument("bin count must be >= 1");

    auto ece_at = [&](double t) {
        std::vector<double> scores(logits.size());
        for (std::size_t i = 0; i < logits.size(); ++i) scores[i] = sigmoid(logits[i] / t);
        return compute_ece(scores, labels, config);
    };

    constexpr std::size_t kGridPoints = 200;
    constexpr double kTLow = 0.05;
    constexpr double kTHigh = 20.0;
    const double log_lo = std::log(kTLow);
    const double log_hi = std::log(kTHigh);

    std::vector<double> grid(kGridPoints);
    std::size_t nearest_one = 0;
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
        grid[i] = std::exp(log_lo + frac * (log_hi - log_lo));
        if (std::abs(std::log(grid[i])) < std::abs(std::log(grid[nearest_one]))) nearest_one = i;
    }
    grid[nearest_one] = 1.0; // the grid must contain the identity temperature

    double best_t = grid[0];
    double best_ece = 0.0;
    double ece_before = 0.0;
    auto better = [](double t, double ece, double cur_t, double cur_ece) {
        if (ece != cur_ece) return ece < cur_ece;
        double d_new = std::abs(t - 1.0);
        double d_cur = std::abs(cur_t - 1.0);
        if (d_new != d_cur) return d_new < d_cur;
        return t < cur_t;
    };

    std::size_t best_index = 0;
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        double e = ece_at(grid[i]);
        if (i == nearest_one) ece_before = e;
        if (i == 0 || better(grid[i], e, best_t, best_ece)) {
            best_t = grid[i];
            best_ece = e;
            best_index = i;
        }
    }

    // One golden-section pass over the log-temperature interval spanned by
    // the grid neighbors of the minimum.
    constexpr std::size_t kRefineIterations = 30;
    double a = std::log(grid[best_index == 0 ? 0 : best_index - 1]);
    double b = std::log(grid[std::min(best_index + 1, kGridPoints - 1)]);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double f_c = ece_at(std::exp(c));
    double f_d = ece_at(std::exp(d));
    std::size_t refinement_evaluations = 2;
    auto consider = [&](double log_t, double ece) {
        double t = std::exp(log_t);
        if (better(t, ece, best_t, best_ece)) {
            best_t = t;
            best_ece = ece;
        }
    };
    consider(c, f_c);
    consider(d, f_d);
    for (std::size_t i = 0; i < kRefineIterations; ++i) {
        if (f_c <= f_d) {
            b = d;
            d = c;
            f_d = f_c;
            c = b - inv_phi * (b - a);
            f_c = ece_at(std::exp(c));
            ++refinement_evaluations;
            consider(c, f_c);
        } else {
            a = c;
            c = d;
            f_c = f_d;
            d = a + inv_phi * (b - a);
            f_d = ece_at(std::exp(d));
            ++refinement_evaluations;
            consider(d, f_d);
        }
    }

    CalibrationArtifact artifact;
    artifact.temperature = best_t;
    artifact.config = config;
    artifact.ece_before = ece_before;
    artifact.ece_after = best_ece;
    artifact.fitted_on = fitted_on;
    artifact.grid_evaluations = kGridPoints;
    artifact.refinement_evaluations = refinement_evaluations;
    return artifact;
}

void save_calibration(const std::filesystem::path& path, const CalibrationArtifact& artifact) {
    nlohmann::ordered_json j{
        {"T", artifact.temperature},
        {"M", artifact.config.bins},
        {"binning", to_string(artifact.config.binning)},
        {"ece_before", artifact.ece_before},
        {"ece_after", artifact.ece_after},
        {"fitted_on", artifact.fitted_on},
        {"evaluations",
         {{"grid", artifact.grid_evaluations}, {"refinement", artifact.refinement_evaluations}}},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoFailure("failed writing " + path.string());
}

CalibrationArtifact load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoFailure(path.string() + ": " + e.what());
    }
    CalibrationArtifact artifact;
    artifact.temperature = j.at("T").get<double>();
    artifact.config.bins = j.at("M").get<std::size_t>();
    artifact.config.binning = binning_from_string(j.at("binning").get<std::string>());
    artifact.ece_before = j.at("ece_before").get<double>();
    artifact.ece_after = j.at("ece_after").get<double>();
    artifact.fitted_on = j.at("fitted_on").get<std::string>();
    if (j.contains("evaluations")) {
        artifact.grid_evaluations = j["evaluations"].value("grid", 0);
        artifact.refinement_evaluations = j["evaluations"].value("refinement", 0);
    }
    if (!(artifact.temperature > 0.0)) throw IoFailure("calibration temperature must be > 0");
    return artifact;
}

} // namespace verity

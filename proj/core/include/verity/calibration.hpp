#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace verity {

enum class Binning {
    equal_width, // M intervals over [0,1], s = 1.0 falls in the last
    equal_mass,  // score-sorted split into M contiguous runs
};

const char* to_string(Binning binning);
Binning binning_from_string(std::string_view text);

struct CalibrationConfig {
    std::size_t bins = 10;
    Binning binning = Binning::equal_mass;
};

struct CalibrationArtifact {
    double temperature = 1.0;
    CalibrationConfig config;
    double ece_before = 0.0;
    double ece_after = 0.0;
    std::string fitted_on;
    std::size_t grid_evaluations = 0;
    std::size_t refinement_evaluations = 0;
};

struct ReliabilityRow {
    double bin_center = 0.0;
    double mean_score = 0.0;
    double accuracy = 0.0;
    std::size_t count = 0;
};

// ECE = sum_m (|B_m|/|D|) * |mean(y) - mean(s)| over the configured binning.
// equal_mass splits the score-sorted sequence (stable in input order on ties)
// into runs of floor(n/M) or ceil(n/M), the first n mod M runs taking the
// larger size. Empty bins contribute 0.
double compute_ece(std::span<const double> scores, std::span<const int> labels,
                   const CalibrationConfig& config);

// Minimizes ECE of sigmoid(z/T) over a 200-point log-spaced grid on
// [0.05, 20] (with the point nearest 1 snapped to exactly 1), then one
// golden-section refinement pass around the grid minimum. Ties prefer T
// closest to 1, then the smaller T. ece_before is evaluated at T = 1.
CalibrationArtifact fit_temperature(std::span<const double> logits, std::span<const int> labels,
                                    const CalibrationConfig& config,
                                    const std::string& fitted_on);

// One row per non-empty bin, ordered by bin; counts sum to the input size.
// Bin centers are interval midpoints (equal_width) or the midpoint of the
// bin's observed score range (equal_mass).
std::vector<ReliabilityRow> reliability_curve(std::span<const double> scores,
                                              std::span<const int> labels,
                                              const CalibrationConfig& config);

void save_calibration(const std::filesystem::path& path, const CalibrationArtifact& artifact);
CalibrationArtifact load_calibration(const std::filesystem::path& path);

} // namespace verity

#pragma once

#include "verity/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace verity {

// Optimizer and schedule position, stored so training can resume bitwise.
struct TrainState {
    char stage = 'a';          // 'a' or 'b'
    std::uint64_t step = 0;    // completed optimizer steps within the stage
    std::vector<double> m;     // Adam first moments, flat model layout
    std::vector<double> v;     // Adam second moments
};

struct LoadedCheckpoint {
    VerifierModel model;
    std::optional<TrainState> state;
};

// Binary, little-endian, raw IEEE doubles; loading restores scores
// bit-identically.
void save_checkpoint(const std::filesystem::path& path, const VerifierModel& model,
                     const TrainState* state = nullptr);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

} // namespace verity

#pragma once

#include "verity/batching.hpp"
#include "verity/checkpoint.hpp"
#include "verity/model.hpp"
#include "verity/objectives.hpp"
#include "verity/statement.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace verity {

struct StageSettings {
    std::uint64_t steps = 0;     // optimizer updates; 0 makes the stage a no-op
    double learning_rate = 1e-3; // constant, no schedule
};

struct TrainConfig {
    StageSettings stage_a;
    StageSettings stage_b;
    LossWeights weights;
    BatchConfig batch;        // batch.seed/cap_seed are managed by the trainer
    std::uint64_t seed = 0;
    std::uint64_t checkpoint_every = 0; // 0 = final checkpoint only
    bool freeze_cap = false;  // keep per-group caps fixed across epochs
    // Not in the reference recipe; all three default to off.
    double weight_decay = 0.0;
    double grad_clip = 0.0;       // 0 disables
    std::uint64_t warmup_steps = 0; // 0 disables
    // Reference model shape.
    std::size_t dim = 64;
    std::size_t vocab_max = 0; // 0 = unbounded

    void validate() const;
};

// Flat key=value file, '#' comments. Unknown keys are rejected. Keys:
//   seed, dim, vocab_max, max_tokens, groups_per_batch, cap_per_group,
//   freeze_cap, steps_a, steps_b, lr_a, lr_b, alpha, beta, gamma, tau,
//   checkpoint_every, weight_decay, grad_clip, warmup_steps
TrainConfig parse_train_config(const std::filesystem::path& path);
TrainConfig parse_train_config_text(const std::string& text, const std::string& name);

class Trainer {
public:
    explicit Trainer(TrainConfig config);

    const TrainConfig& config() const { return config_; }

    // Fresh reference model whose vocabulary is built from both partitions.
    VerifierModel initialize(const DatasetPartition& stage_a,
                             const DatasetPartition& stage_b) const;

    // Runs the stage's remaining steps on `model` in place. Adam moments
    // start at zero unless `resume` carries them. Per-step loss breakdowns go
    // to `log` as JSONL; intermediate checkpoints (if configured) into
    // checkpoint_dir. Returns the final optimizer state.
    TrainState train_stage(VerifierModel& model, const DatasetPartition& data, char stage_tag,
                           std::ostream* log = nullptr,
                           const std::filesystem::path& checkpoint_dir = {},
                           const TrainState* resume = nullptr);

    // Stage A then stage B, B starting from the stage-A result. Stage-A data
    // must be KB-derived (kb_original / kb_perturbed origins only).
    VerifierModel run_pipeline(const DatasetPartition& stage_a, const DatasetPartition& stage_b,
                               std::ostream* log = nullptr,
                               const std::filesystem::path& checkpoint_dir = {});

    // Continues an interrupted pipeline from a loaded checkpoint.
    void resume_pipeline(VerifierModel& model, const TrainState& state,
                         const DatasetPartition& stage_a, const DatasetPartition& stage_b,
                         std::ostream* log = nullptr,
                         const std::filesystem::path& checkpoint_dir = {});

private:
    TrainConfig config_;
};

} // namespace verity

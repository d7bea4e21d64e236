#pragma once

#include "verity/batching.hpp"

#include <span>
#include <vector>

namespace verity {

struct LossWeights {
    double alpha = 1.0; // binary term
    double beta = 1.0;  // multi-class term
    double gamma = 0.1; // contrastive term
    double tau = 0.05;  // contrastive temperature
};

struct LossBreakdown {
    double bin = 0.0;
    double mc = 0.0;
    double ctr = 0.0;
    double total = 0.0;
    std::size_t mc_group_count = 0;   // groups contributing to the multi-class term
    std::size_t ctr_anchor_count = 0; // anchors contributing to the contrastive term
};

struct LossGradients {
    std::vector<double> d_logit;                // aligned with batch.flat
    std::vector<std::vector<double>> d_repr;    // aligned with batch.flat
};

// Per-statement cross-entropy, averaged separately over the true and false
// subsets of each group, subset means summed per group, group values averaged
// over the batch. Scores are clamped to [1e-7, 1-1e-7] inside the logs only.
double binary_loss(const Batch& batch, std::span<const double> scores);

// -log softmax(z)[correct] per multiple-statement group, averaged over
// contributing groups; single-statement groups are excluded. 0 when nothing
// contributes.
double multiclass_loss(const Batch& batch, std::span<const double> logits);

// Supervised contrastive loss over cosine similarities of the flat batch.
// P(i) = same-label others, N(i) = opposite-label statements; anchors with
// empty P(i) are skipped and the average runs over contributing anchors only.
double contrastive_loss(const Batch& batch, const std::vector<std::vector<double>>& representations,
                        double tau);

// alpha * bin + beta * mc + gamma * ctr, with the exclusion rules above. The
// contrastive term is only evaluated when gamma != 0. Scores for the binary
// term are sigmoid(logit); no temperature is involved during training.
LossBreakdown combined_loss(const Batch& batch, std::span<const double> logits,
                            const std::vector<std::vector<double>>& representations,
                            const LossWeights& weights);

// Same value, plus d(total)/d(logit) and d(total)/d(representation).
LossBreakdown combined_loss_grad(const Batch& batch, std::span<const double> logits,
                                 const std::vector<std::vector<double>>& representations,
                                 const LossWeights& weights, LossGradients& gradients);

} // namespace verity

#include "verity/objectives.hpp"

#include "verity/errors.hpp"
#include "verity/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace verity {

namespace {

constexpr double kScoreFloor = 1e-7;

double clamped_log(double x) {
    return std::log(std::clamp(x, kScoreFloor, 1.0 - kScoreFloor));
}

void check_finite_inputs(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteLoss(std::string(what) + " contains a non-finite value");
    }
}

void check_alignment(const Batch& batch, std::size_t n, const char* what) {
    if (batch.group_count() == 0) throw EmptyInput("batch has no groups");
    if (n != batch.size()) {
        throw InvalidArgument(std::string(what) + " not aligned with batch statements");
    }
}

void check_weights(const LossWeights& w) {
    if (!(w.tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (w.alpha < 0.0 || w.beta < 0.0 || w.gamma < 0.0) {
        throw InvalidArgument("loss weights must be >= 0");
    }
}

// Core of the binary term. Per-statement weights (for the gradient) are
// 1 / (B_G * n_{group,label}).
double binary_core(const Batch& batch, std::span<const double> scores,
                   std::vector<double>* weights_out) {
    const double group_count = static_cast<double>(batch.group_count());
    if (weights_out) weights_out->assign(batch.size(), 0.0);
    double total = 0.0;
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        std::span<const int> labels = batch.group_labels(g);
        std::size_t pos = 0;
        for (int y : labels) pos += static_cast<std::size_t>(y);
        std::size_t neg = labels.size() - pos;
        double group_value = 0.0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            std::size_t flat = batch.offsets[g] + j;
            double s = scores[flat];
            double share = labels[j] ? static_cast<double>(pos) : static_cast<double>(neg);
            double ce = labels[j] ? -clamped_log(s) : -clamped_log(1.0 - s);
            group_value += ce / share;
            if (weights_out) (*weights_out)[flat] = 1.0 / (group_count * share);
        }
        total += group_value;
    }
    double loss = total / group_count;
    if (!std::isfinite(loss)) throw NonFiniteLoss("binary loss is non-finite");
    return loss;
}

struct McTermResult {
    double loss = 0.0;
    std::size_t contributing = 0;
};

McTermResult multiclass_core(const Batch& batch, std::span<const double> logits,
                             std::vector<double>* grad_out) {
    if (grad_out) grad_out->assign(batch.size(), 0.0);
    McTermResult result;
    std::vector<std::size_t> contributors;
    for (std::size_t g = 0; g < batch.group_count(); ++g) {
        if (batch.offsets[g + 1] - batch.offsets[g] > 1) contributors.push_back(g);
    }
    result.contributing = contributors.size();
    if (contributors.empty()) return result;

    double total = 0.0;
    for (std::size_t g : contributors) {
        std::size_t begin = batch.offsets[g];
        std::size_t size = batch.offsets[g + 1] - begin;
        std::span<const int> labels = batch.group_labels(g);
        std::size_t correct = size;
        std::size_t correct_count = 0;
        for (std::size_t j = 0; j < size; ++j) {
            if (labels[j]) {
                correct = j;
                ++correct_count;
            }
        }
        if (correct_count != 1) {
            throw InvalidGroup("group '" + batch.groups[g].group_id +
                               "' needs exactly one correct statement for the multi-class term");
        }
        std::span<const double> z(logits.data() + begin, size);
        double lse = log_sum_exp(z);
        total += lse - z[correct];
        if (grad_out) {
            double inv = 1.0 / static_cast<double>(contributors.size());
            for (std::size_t j = 0; j < size; ++j) {
                double p = std::exp(z[j] - lse);
                (*grad_out)[begin + j] = (p - (j == correct ? 1.0 : 0.0)) * inv;
            }
        }
    }
    result.loss = total / static_cast<double>(contributors.size());
    if (!std::isfinite(result.loss)) throw NonFiniteLoss("multi-class loss is non-finite");
    return result;
}

struct CtrTermResult {
    double loss = 0.0;
    std::size_t contributing = 0;
};

CtrTermResult contrastive_core(const Batch& batch,
                               const std::vector<std::vector<double>>& reprs, double tau,
                               std::vector<std::vector<double>>* grad_out) {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    const std::size_t n = batch.size();
    if (reprs.size() != n) throw InvalidArgument("representations not aligned with batch");
    CtrTermResult result;
    if (n == 0) throw EmptyInput("batch has no statements");

    const std::size_t d = reprs[0].size();
    std::vector<double> norms(n, 0.0);
    std::vector<std::vector<double>> units(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (reprs[i].size() != d) throw InvalidArgument("representations differ in width");
        check_finite_inputs(reprs[i], "representation");
        double norm = l2_norm(reprs[i]);
        if (norm == 0.0) {
            throw ZeroVector("representation " + std::to_string(i) + " has zero norm");
        }
        norms[i] = norm;
        units[i].resize(d);
        for (std::size_t c = 0; c < d; ++c) units[i][c] = reprs[i][c] / norm;
    }
    if (grad_out) {
        grad_out->assign(n, std::vector<double>(d, 0.0));
    }
    if (n < 2) return result;

    // Cosine matrix.
    std::vector<double> cos(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            double u = dot(units[i], units[k]);
            cos[i * n + k] = u;
            cos[k * n + i] = u;
        }
    }

    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < n; ++i) {
        bool has_positive = false;
        for (std::size_t k = 0; k < n && !has_positive; ++k) {
            if (k != i && batch.labels[k] == batch.labels[i]) has_positive = true;
        }
        if (has_positive) anchors.push_back(i);
    }
    result.contributing = anchors.size();
    if (anchors.empty()) return result;

    const double inv_contrib = 1.0 / static_cast<double>(anchors.size());
    double total = 0.0;
    std::vector<double> ex(n, 0.0);
    for (std::size_t i : anchors) {
        double m = -1e300;
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i) m = std::max(m, cos[i * n + k] / tau);
        }
        double pos_sum = 0.0;
        double all_sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            ex[k] = std::exp(cos[i * n + k] / tau - m);
            all_sum += ex[k];
            if (batch.labels[k] == batch.labels[i]) pos_sum += ex[k];
        }
        total += std::log(all_sum) - std::log(pos_sum);
        if (grad_out) {
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                bool positive = batch.labels[k] == batch.labels[i];
                double d_u = (ex[k] / all_sum - (positive ? ex[k] / pos_sum : 0.0)) / tau;
                double g = d_u * inv_contrib;
                double u = cos[i * n + k];
                for (std::size_t c = 0; c < d; ++c) {
                    (*grad_out)[i][c] += g * (units[k][c] - u * units[i][c]) / norms[i];
                    (*grad_out)[k][c] += g * (units[i][c] - u * units[k][c]) / norms[k];
                }
            }
        }
    }
    result.loss = total * inv_contrib;
    if (!std::isfinite(result.loss)) throw NonFiniteLoss("contrastive loss is non-finite");
    return result;
}

} // namespace

double binary_loss(const Batch& batch, std::span<const double> scores) {
    check_alignment(batch, scores.size(), "scores");
    check_finite_inputs(scores, "scores");
    return binary_core(batch, scores, nullptr);
}

double multiclass_loss(const Batch& batch, std::span<const double> logits) {
    check_alignment(batch, logits.size(), "logits");
    check_finite_inputs(logits, "logits");
    return multiclass_core(batch, logits, nullptr).loss;
}

double contrastive_loss(const Batch& batch, const std::vector<std::vector<double>>& representations,
                        double tau) {
    check_alignment(batch, representations.size(), "representations");
    return contrastive_core(batch, representations, tau, nullptr).loss;
}

LossBreakdown combined_loss(const Batch& batch, std::span<const double> logits,
                            const std::vector<std::vector<double>>& representations,
                            const LossWeights& weights) {
    check_weights(weights);
    check_alignment(batch, logits.size(), "logits");
    check_finite_inputs(logits, "logits");

    LossBreakdown out;
    std::vector<double> scores(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) scores[i] = sigmoid(logits[i]);
    out.bin = binary_core(batch, scores, nullptr);
    McTermResult mc = multiclass_core(batch, logits, nullptr);
    out.mc = mc.loss;
    out.mc_group_count = mc.contributing;
    if (weights.gamma != 0.0) {
        CtrTermResult ctr = contrastive_core(batch, representations, weights.tau, nullptr);
        out.ctr = ctr.loss;
        out.ctr_anchor_count = ctr.contributing;
    }
    out.total = weights.alpha * out.bin + weights.beta * out.mc + weights.gamma * out.ctr;
    if (!std::isfinite(out.total)) throw NonFiniteLoss("combined loss is non-finite");
    return out;
}

LossBreakdown combined_loss_grad(const Batch& batch, std::span<const double> logits,
                                 const std::vector<std::vector<double>>& representations,
                                 const LossWeights& weights, LossGradients& gradients) {
    check_weights(weights);
    check_alignment(batch, logits.size(), "logits");
    check_finite_inputs(logits, "logits");

    LossBreakdown out;
    std::vector<double> scores(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) scores[i] = sigmoid(logits[i]);

    std::vector<double> bin_weights;
    out.bin = binary_core(batch, scores, &bin_weights);
    std::vector<double> mc_grad;
    McTermResult mc = multiclass_core(batch, logits, &mc_grad);
    out.mc = mc.loss;
    out.mc_group_count = mc.contributing;

    gradients.d_logit.assign(batch.size(), 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double y = static_cast<double>(batch.labels[i]);
        gradients.d_logit[i] = weights.alpha * bin_weights[i] * (scores[i] - y) +
                               weights.beta * mc_grad[i];
    }

    if (weights.gamma != 0.0) {
        std::vector<std::vector<double>> ctr_grad;
        CtrTermResult ctr = contrastive_core(batch, representations, weights.tau, &ctr_grad);
        out.ctr = ctr.loss;
        out.ctr_anchor_count = ctr.contributing;
        gradients.d_repr.assign(batch.size(), {});
        for (std::size_t i = 0; i < batch.size(); ++i) {
            gradients.d_repr[i].assign(ctr_grad[i].size(), 0.0);
            for (std::size_t c = 0; c < ctr_grad[i].size(); ++c) {
                gradients.d_repr[i][c] = weights.gamma * ctr_grad[i][c];
            }
        }
    } else {
        std::size_t width = representations.empty() ? 0 : representations[0].size();
        gradients.d_repr.assign(batch.size(), std::vector<double>(width, 0.0));
    }

    out.total = weights.alpha * out.bin + weights.beta * out.mc + weights.gamma * out.ctr;
    if (!std::isfinite(out.total)) throw NonFiniteLoss("combined loss is non-finite");
    return out;
}

} // namespace verity

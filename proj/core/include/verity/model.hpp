#pragma once

#include "verity/rng.hpp"
#include "verity/statement.hpp"
#include "verity/tokenizer.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verity {

// Opaque per-statement forward state kept around for the backward pass.
struct EncodeTrace {
    virtual ~EncodeTrace() = default;
};

// Maps a token id sequence (EOS-terminated, EOS id 0) to a fixed-width
// representation. Implementations own a flat parameter vector so optimizers
// can treat them uniformly.
class FeatureExtractor {
public:
    virtual ~FeatureExtractor() = default;

    virtual std::size_t dim() const = 0;
    virtual std::size_t param_count() const = 0;
    virtual std::span<double> params() = 0;
    virtual std::span<const double> params() const = 0;
    virtual std::string architecture() const = 0;

    // Inference path.
    virtual std::vector<double> encode(std::span<const int> ids) const = 0;

    // Training path: forward keeping intermediate state, then gradient
    // accumulation. param_grad has param_count() entries and is added to.
    virtual std::unique_ptr<EncodeTrace> encode_traced(std::span<const int> ids,
                                                       std::vector<double>& repr_out) const = 0;
    virtual void accumulate_grad(const EncodeTrace& trace, std::span<const double> repr_grad,
                                 std::span<double> param_grad) const = 0;
};

// Reference desk-scale extractor: token embeddings, one self-attention block
// with the EOS position as the query, and a residual connection. The
// representation is h = e_eos + sum_i a_i * (Wv e_i) with attention weights
// a = softmax((Wq e_eos) . (Wk e_i) / sqrt(d)).
class AttentionExtractor final : public FeatureExtractor {
public:
    AttentionExtractor(std::size_t vocab_size, std::size_t dim);

    // Embeddings ~ N(0, 0.2), projections ~ N(0, 1/sqrt(dim)), in a fixed
    // draw order.
    void init_params(Rng& rng);

    std::size_t dim() const override { return dim_; }
    std::size_t vocab_size() const { return vocab_size_; }
    std::size_t param_count() const override { return params_.size(); }
    std::span<double> params() override { return params_; }
    std::span<const double> params() const override { return params_; }
    std::string architecture() const override { return "eos-attention-v1"; }

    std::vector<double> encode(std::span<const int> ids) const override;
    std::unique_ptr<EncodeTrace> encode_traced(std::span<const int> ids,
                                               std::vector<double>& repr_out) const override;
    void accumulate_grad(const EncodeTrace& trace, std::span<const double> repr_grad,
                         std::span<double> param_grad) const override;

private:
    struct Trace;

    std::span<const double> embedding(std::size_t token) const;
    void check_ids(std::span<const int> ids) const;

    std::size_t vocab_size_;
    std::size_t dim_;
    std::vector<double> params_; // [E (V x d)][Wq (d x d)][Wk (d x d)][Wv (d x d)]
};

struct LinearHead {
    std::vector<double> weight;
    double bias = 0.0;

    double logit(std::span<const double> repr) const;
};

// The full scorer: tokenizer table, extractor, linear head, and a softmax
// temperature applied at inference time only.
class VerifierModel {
public:
    VerifierModel() = default;
    VerifierModel(Vocabulary vocab, std::unique_ptr<FeatureExtractor> extractor, LinearHead head,
                  std::size_t max_tokens);

    // Reference configuration: attention extractor plus a zero-initialized
    // head, so an untrained model scores every statement exactly 0.5.
    static VerifierModel make_reference(Vocabulary vocab, std::size_t dim, std::size_t max_tokens,
                                        std::uint64_t seed);

    const Vocabulary& vocab() const { return vocab_; }
    FeatureExtractor& extractor() { return *extractor_; }
    const FeatureExtractor& extractor() const { return *extractor_; }
    LinearHead& head() { return head_; }
    const LinearHead& head() const { return head_; }
    std::size_t max_tokens() const { return max_tokens_; }

    double temperature() const { return temperature_; }
    void set_temperature(double t);

    std::vector<int> encode_ids(std::string_view text) const;
    std::vector<double> representation(std::string_view text) const;

    // Pre-temperature logit.
    double raw_logit(std::string_view text) const;

    // logit is the raw value; score applies the temperature; predicted is the
    // decision at threshold 0.5 (equivalently raw logit > 0).
    ScoredStatement score(const Statement& statement) const;
    std::vector<ScoredStatement> score_group(const StatementGroup& group) const;

    // Flat parameter layout for optimizers: extractor params, then head
    // weight, then head bias.
    std::size_t param_count() const;
    double get_param(std::size_t i) const;
    void set_param(std::size_t i, double value);
    void add_to_params(std::span<const double> delta, double scale);

private:
    Vocabulary vocab_;
    std::unique_ptr<FeatureExtractor> extractor_;
    LinearHead head_;
    double temperature_ = 1.0;
    std::size_t max_tokens_ = 128;
};

} // namespace verity

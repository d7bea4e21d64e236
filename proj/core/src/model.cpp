#include "verity/model.hpp"

#include "verity/errors.hpp"
#include "verity/numeric.hpp"

#include <cmath>

namespace verity {

namespace {

constexpr std::size_t kEmbeddingOffset = 0;

} // namespace

AttentionExtractor::AttentionExtractor(std::size_t vocab_size, std::size_t dim)
    : vocab_size_(vocab_size), dim_(dim) {
    if (vocab_size < 1 || dim < 1) {
        throw InvalidArgument("extractor needs vocab_size >= 1 and dim >= 1");
    }
    params_.assign(vocab_size_ * dim_ + 3 * dim_ * dim_, 0.0);
}

void AttentionExtractor::init_params(Rng& rng) {
    std::size_t ed = vocab_size_ * dim_;
    for (std::size_t i = 0; i < ed; ++i) {
        params_[i] = rng.normal(0.0, 0.2);
    }
    double proj_scale = 1.0 / std::sqrt(static_cast<double>(dim_));
    for (std::size_t i = ed; i < params_.size(); ++i) {
        params_[i] = rng.normal(0.0, proj_scale);
    }
}

std::span<const double> AttentionExtractor::embedding(std::size_t token) const {
    return std::span<const double>(params_).subspan(kEmbeddingOffset + token * dim_, dim_);
}

void AttentionExtractor::check_ids(std::span<const int> ids) const {
    if (ids.empty()) throw EmptyInput("cannot encode an empty token sequence");
    if (ids.back() != Vocabulary::eos_id) {
        throw MissingEOS("token sequence does not end with EOS");
    }
    for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
            throw InvalidArgument("token id " + std::to_string(id) + " outside vocabulary");
        }
    }
}

struct AttentionExtractor::Trace : EncodeTrace {
    std::vector<int> ids;
    std::vector<double> q;      // d
    std::vector<double> keys;   // n x d
    std::vector<double> values; // n x d
    std::vector<double> attn;   // n
};

std::vector<double> AttentionExtractor::encode(std::span<const int> ids) const {
    std::vector<double> repr;
    auto trace = encode_traced(ids, repr);
    return repr;
}

std::unique_ptr<EncodeTrace> AttentionExtractor::encode_traced(std::span<const int> ids,
                                                               std::vector<double>& repr_out) const {
    check_ids(ids);
    const std::size_t n = ids.size();
    const std::size_t d = dim_;
    const double* wq = params_.data() + vocab_size_ * d;
    const double* wk = wq + d * d;
    const double* wv = wk + d * d;

    auto trace = std::make_unique<Trace>();
    trace->ids.assign(ids.begin(), ids.end());
    trace->q.assign(d, 0.0);
    trace->keys.assign(n * d, 0.0);
    trace->values.assign(n * d, 0.0);
    trace->attn.assign(n, 0.0);

    std::span<const double> e_last = embedding(static_cast<std::size_t>(ids[n - 1]));
    for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += wq[r * d + c] * e_last[c];
        trace->q[r] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> e_i = embedding(static_cast<std::size_t>(ids[i]));
        for (std::size_t r = 0; r < d; ++r) {
            double k_acc = 0.0;
            double v_acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                k_acc += wk[r * d + c] * e_i[c];
                v_acc += wv[r * d + c] * e_i[c];
            }
            trace->keys[i * d + r] = k_acc;
            trace->values[i * d + r] = v_acc;
        }
    }

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    double max_logit = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        double logit = 0.0;
        for (std::size_t r = 0; r < d; ++r) logit += trace->q[r] * trace->keys[i * d + r];
        logit *= inv_sqrt_d;
        trace->attn[i] = logit;
        max_logit = std::max(max_logit, logit);
    }
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace->attn[i] = std::exp(trace->attn[i] - max_logit);
        denom += trace->attn[i];
    }
    for (std::size_t i = 0; i < n; ++i) trace->attn[i] /= denom;

    repr_out.assign(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) repr_out[r] = e_last[r];
    for (std::size_t i = 0; i < n; ++i) {
        double a = trace->attn[i];
        for (std::size_t r = 0; r < d; ++r) repr_out[r] += a * trace->values[i * d + r];
    }
    return trace;
}

void AttentionExtractor::accumulate_grad(const EncodeTrace& trace_in,
                                         std::span<const double> repr_grad,
                                         std::span<double> param_grad) const {
    const auto& trace = dynamic_cast<const Trace&>(trace_in);
    const std::size_t n = trace.ids.size();
    const std::size_t d = dim_;
    const double* wq = params_.data() + vocab_size_ * d;
    const double* wk = wq + d * d;
    const double* wv = wk + d * d;
    double* g_e = param_grad.data();
    double* g_wq = g_e + vocab_size_ * d;
    double* g_wk = g_wq + d * d;
    double* g_wv = g_wk + d * d;

    // d(repr)/d(values), d(repr)/d(attn)
    std::vector<double> d_attn(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < d; ++r) acc += repr_grad[r] * trace.values[i * d + r];
        d_attn[i] = acc;
    }
    // softmax backward
    double mix = 0.0;
    for (std::size_t i = 0; i < n; ++i) mix += trace.attn[i] * d_attn[i];
    std::vector<double> d_logit(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d_logit[i] = trace.attn[i] * (d_attn[i] - mix);

    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<double> d_q(d, 0.0);
    std::vector<double> d_e(n * d, 0.0); // per-position embedding grads

    // residual path
    for (std::size_t r = 0; r < d; ++r) d_e[(n - 1) * d + r] += repr_grad[r];

    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> e_i = embedding(static_cast<std::size_t>(trace.ids[i]));
        double a = trace.attn[i];
        double dl = d_logit[i] * inv_sqrt_d;
        for (std::size_t r = 0; r < d; ++r) {
            // values path: d(value_i) = attn_i * repr_grad
            double dv = a * repr_grad[r];
            // keys path: d(key_i) = d_logit_i * q / sqrt(d)
            double dk = dl * trace.q[r];
            d_q[r] += dl * trace.keys[i * d + r];
            for (std::size_t c = 0; c < d; ++c) {
                g_wv[r * d + c] += dv * e_i[c];
                g_wk[r * d + c] += dk * e_i[c];
            }
            for (std::size_t c = 0; c < d; ++c) {
                d_e[i * d + c] += wv[r * d + c] * dv + wk[r * d + c] * dk;
            }
        }
    }

    std::span<const double> e_last = embedding(static_cast<std::size_t>(trace.ids[n - 1]));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            g_wq[r * d + c] += d_q[r] * e_last[c];
            d_e[(n - 1) * d + c] += wq[r * d + c] * d_q[r];
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        double* row = g_e + static_cast<std::size_t>(trace.ids[i]) * d;
        for (std::size_t c = 0; c < d; ++c) row[c] += d_e[i * d + c];
    }
}

double LinearHead::logit(std::span<const double> repr) const {
    if (repr.size() != weight.size()) {
        throw InvalidArgument("representation width does not match head");
    }
    return dot(weight, repr) + bias;
}

VerifierModel::VerifierModel(Vocabulary vocab, std::unique_ptr<FeatureExtractor> extractor,
                             LinearHead head, std::size_t max_tokens)
    : vocab_(std::move(vocab)), extractor_(std::move(extractor)), head_(std::move(head)),
      max_tokens_(max_tokens) {
    if (!extractor_) throw InvalidArgument("model needs an extractor");
    if (head_.weight.size() != extractor_->dim()) {
        throw InvalidArgument("head width does not match extractor dim");
    }
    if (max_tokens_ < 1) throw InvalidArgument("max_tokens must be >= 1");
}

VerifierModel VerifierModel::make_reference(Vocabulary vocab, std::size_t dim,
                                            std::size_t max_tokens, std::uint64_t seed) {
    auto extractor = std::make_unique<AttentionExtractor>(vocab.size(), dim);
    Rng rng(derive_seed(seed, "model_init"));
    extractor->init_params(rng);
    LinearHead head;
    head.weight.assign(dim, 0.0);
    head.bias = 0.0;
    return VerifierModel(std::move(vocab), std::move(extractor), std::move(head), max_tokens);
}

void VerifierModel::set_temperature(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("temperature must be finite and > 0");
    }
    temperature_ = t;
}

std::vector<int> VerifierModel::encode_ids(std::string_view text) const {
    return vocab_.encode(text, max_tokens_);
}

std::vector<double> VerifierModel::representation(std::string_view text) const {
    return extractor_->encode(encode_ids(text));
}

double VerifierModel::raw_logit(std::string_view text) const {
    return head_.logit(representation(text));
}

ScoredStatement VerifierModel::score(const Statement& statement) const {
    ScoredStatement out;
    out.statement = statement;
    out.logit = raw_logit(statement.text);
    out.score = sigmoid(out.logit / temperature_);
    out.predicted = out.logit > 0.0;
    return out;
}

std::vector<ScoredStatement> VerifierModel::score_group(const StatementGroup& group) const {
    std::vector<ScoredStatement> out;
    out.reserve(group.statements.size());
    for (const Statement& st : group.statements) out.push_back(score(st));
    return out;
}

std::size_t VerifierModel::param_count() const {
    return extractor_->param_count() + head_.weight.size() + 1;
}

double VerifierModel::get_param(std::size_t i) const {
    std::size_t pc = extractor_->param_count();
    if (i < pc) return extractor_->params()[i];
    i -= pc;
    if (i < head_.weight.size()) return head_.weight[i];
    return head_.bias;
}

void VerifierModel::set_param(std::size_t i, double value) {
    std::size_t pc = extractor_->param_count();
    if (i < pc) {
        extractor_->params()[i] = value;
        return;
    }
    i -= pc;
    if (i < head_.weight.size()) {
        head_.weight[i] = value;
        return;
    }
    head_.bias = value;
}

void VerifierModel::add_to_params(std::span<const double> delta, double scale) {
    if (delta.size() != param_count()) {
        throw InvalidArgument("delta size does not match parameter count");
    }
    std::span<double> ext = extractor_->params();
    std::size_t pc = ext.size();
    for (std::size_t i = 0; i < pc; ++i) ext[i] += scale * delta[i];
    for (std::size_t i = 0; i < head_.weight.size(); ++i) {
        head_.weight[i] += scale * delta[pc + i];
    }
    head_.bias += scale * delta[pc + head_.weight.size()];
}

} // namespace verity

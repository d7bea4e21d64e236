#include "verity/trainer.hpp"

#include "verity/errors.hpp"
#include "verity/numeric.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace verity {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

std::vector<std::string> collect_texts(const DatasetPartition& a, const DatasetPartition& b) {
    std::vector<std::string> texts;
    for (const DatasetPartition* part : {&a, &b}) {
        for (const StatementGroup& group : part->groups) {
            for (const Statement& st : group.statements) texts.push_back(st.text);
        }
    }
    return texts;
}

void check_stage_tag(char tag) {
    if (tag != 'a' && tag != 'b') throw InvalidArgument("stage tag must be 'a' or 'b'");
}

Stage stage_for_tag(char tag) { return tag == 'a' ? Stage::stage_a : Stage::stage_b; }

} // namespace

void TrainConfig::validate() const {
    if (!(stage_a.learning_rate > 0.0) || !(stage_b.learning_rate > 0.0)) {
        throw InvalidArgument("learning rates must be > 0");
    }
    if (!(weights.tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (weights.alpha < 0.0 || weights.beta < 0.0 || weights.gamma < 0.0) {
        throw InvalidArgument("loss weights must be >= 0");
    }
    if (batch.groups_per_batch < 1) throw InvalidArgument("groups_per_batch must be >= 1");
    if (batch.cap_per_group < 1) throw InvalidArgument("cap_per_group must be >= 1");
    if (batch.max_tokens < 2) throw InvalidArgument("max_tokens must be >= 2");
    if (dim < 1) throw InvalidArgument("dim must be >= 1");
    if (weight_decay < 0.0) throw InvalidArgument("weight_decay must be >= 0");
    if (grad_clip < 0.0) throw InvalidArgument("grad_clip must be >= 0");
}

TrainConfig parse_train_config_text(const std::string& text, const std::string& name) {
    TrainConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument(name + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        auto as_u64 = [&]() -> std::uint64_t {
            try {
                return std::stoull(value);
            } catch (const std::exception&) {
                throw InvalidArgument(name + ":" + std::to_string(lineno) + ": bad integer '" +
                                      value + "'");
            }
        };
        auto as_f64 = [&]() -> double {
            try {
                return std::stod(value);
            } catch (const std::exception&) {
                throw InvalidArgument(name + ":" + std::to_string(lineno) + ": bad number '" +
                                      value + "'");
            }
        };
        auto as_bool = [&]() -> bool {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw InvalidArgument(name + ":" + std::to_string(lineno) + ": bad boolean '" +
                                  value + "'");
        };

        if (key == "seed") config.seed = as_u64();
        else if (key == "dim") config.dim = as_u64();
        else if (key == "vocab_max") config.vocab_max = as_u64();
        else if (key == "max_tokens") config.batch.max_tokens = as_u64();
        else if (key == "groups_per_batch") config.batch.groups_per_batch = as_u64();
        else if (key == "cap_per_group") config.batch.cap_per_group = as_u64();
        else if (key == "freeze_cap") config.freeze_cap = as_bool();
        else if (key == "steps_a") config.stage_a.steps = as_u64();
        else if (key == "steps_b") config.stage_b.steps = as_u64();
        else if (key == "lr_a") config.stage_a.learning_rate = as_f64();
        else if (key == "lr_b") config.stage_b.learning_rate = as_f64();
        else if (key == "alpha") config.weights.alpha = as_f64();
        else if (key == "beta") config.weights.beta = as_f64();
        else if (key == "gamma") config.weights.gamma = as_f64();
        else if (key == "tau") config.weights.tau = as_f64();
        else if (key == "checkpoint_every") config.checkpoint_every = as_u64();
        else if (key == "weight_decay") config.weight_decay = as_f64();
        else if (key == "grad_clip") config.grad_clip = as_f64();
        else if (key == "warmup_steps") config.warmup_steps = as_u64();
        else {
            throw InvalidArgument(name + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                  "'");
        }
    }
    config.validate();
    return config;
}

TrainConfig parse_train_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_train_config_text(buffer.str(), path.string());
}

Trainer::Trainer(TrainConfig config) : config_(std::move(config)) {
    config_.validate();
}

VerifierModel Trainer::initialize(const DatasetPartition& stage_a,
                                  const DatasetPartition& stage_b) const {
    Vocabulary vocab = Vocabulary::build(collect_texts(stage_a, stage_b), config_.vocab_max);
    return VerifierModel::make_reference(std::move(vocab), config_.dim, config_.batch.max_tokens,
                                         config_.seed);
}

TrainState Trainer::train_stage(VerifierModel& model, const DatasetPartition& data, char stage_tag,
                                std::ostream* log, const std::filesystem::path& checkpoint_dir,
                                const TrainState* resume) {
    check_stage_tag(stage_tag);
    if (data.stage != stage_for_tag(stage_tag)) {
        throw InvalidArgument(std::string("partition stage does not match stage '") + stage_tag +
                              "'");
    }
    const StageSettings& stage = stage_tag == 'a' ? config_.stage_a : config_.stage_b;
    const std::string stage_name(1, stage_tag);

    TrainState state;
    state.stage = stage_tag;
    state.m.assign(model.param_count(), 0.0);
    state.v.assign(model.param_count(), 0.0);
    if (resume != nullptr) {
        if (resume->stage != stage_tag) {
            throw InvalidArgument("resume state belongs to another stage");
        }
        if (resume->m.size() != state.m.size() || resume->v.size() != state.v.size()) {
            throw InvalidArgument("resume state does not match the model's parameter count");
        }
        state.step = resume->step;
        state.m = resume->m;
        state.v = resume->v;
    }

    if (log != nullptr) {
        nlohmann::ordered_json header{
            {"log", "train"},
            {"stage", stage_name},
            {"steps", stage.steps},
            {"start_step", state.step},
            {"learning_rate", stage.learning_rate},
            {"groups", data.groups.size()},
            {"ctr_denominator", "contributing_anchors"},
            {"bitwise", true},
        };
        (*log) << header.dump() << '\n';
    }
    if (state.step >= stage.steps) return state;
    if (data.groups.empty()) {
        throw InvalidArgument(std::string("stage '") + stage_tag +
                              "' has steps to run but no data");
    }

    const std::size_t param_count = model.param_count();
    const std::size_t extractor_params = model.extractor().param_count();
    const std::size_t dim = model.extractor().dim();

    std::vector<Batch> batches;
    std::size_t batches_per_epoch =
        (data.groups.size() + config_.batch.groups_per_batch - 1) / config_.batch.groups_per_batch;
    std::uint64_t loaded_epoch = UINT64_MAX;

    std::vector<double> grad(param_count);
    for (std::uint64_t s = state.step; s < stage.steps; ++s) {
        std::uint64_t epoch = s / batches_per_epoch;
        if (epoch != loaded_epoch) {
            BatchConfig bc = config_.batch;
            bc.seed = derive_seed(config_.seed, "stage_" + stage_name + "_epoch", epoch);
            if (config_.freeze_cap) {
                bc.cap_seed = derive_seed(config_.seed, "stage_" + stage_name + "_cap");
            }
            batches = build_batches(data.groups, bc);
            loaded_epoch = epoch;
        }
        const Batch& batch = batches[s % batches_per_epoch];

        // Forward.
        const std::size_t n = batch.size();
        std::vector<std::unique_ptr<EncodeTrace>> traces(n);
        std::vector<std::vector<double>> reprs(n);
        std::vector<double> logits(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> ids = model.encode_ids(batch.statement(i).text);
            traces[i] = model.extractor().encode_traced(ids, reprs[i]);
            logits[i] = model.head().logit(reprs[i]);
        }

        LossGradients loss_grads;
        LossBreakdown breakdown;
        try {
            breakdown = combined_loss_grad(batch, logits, reprs, config_.weights, loss_grads);
        } catch (const NonFiniteLoss& e) {
            throw NonFiniteLoss("stage " + stage_name + " step " + std::to_string(s + 1) + ": " +
                                e.what());
        }

        // Backward through head and extractor.
        std::fill(grad.begin(), grad.end(), 0.0);
        std::span<double> g_extractor(grad.data(), extractor_params);
        std::span<double> g_head_w(grad.data() + extractor_params, dim);
        double& g_head_b = grad[extractor_params + dim];
        std::vector<double> d_repr(dim);
        for (std::size_t i = 0; i < n; ++i) {
            double dz = loss_grads.d_logit[i];
            for (std::size_t c = 0; c < dim; ++c) {
                g_head_w[c] += dz * reprs[i][c];
                d_repr[c] = dz * model.head().weight[c] + loss_grads.d_repr[i][c];
            }
            g_head_b += dz;
            model.extractor().accumulate_grad(*traces[i], d_repr, g_extractor);
        }

        if (config_.grad_clip > 0.0) {
            double norm = l2_norm(grad);
            if (norm > config_.grad_clip) {
                double scale = config_.grad_clip / norm;
                for (double& g : grad) g *= scale;
            }
        }

        double lr = stage.learning_rate;
        if (config_.warmup_steps > 0 && s + 1 < config_.warmup_steps) {
            lr *= static_cast<double>(s + 1) / static_cast<double>(config_.warmup_steps);
        }

        // Adam with bias correction; weight decay (when on) is decoupled.
        double t = static_cast<double>(s + 1);
        double bc1 = 1.0 - std::pow(kBeta1, t);
        double bc2 = 1.0 - std::pow(kBeta2, t);
        for (std::size_t p = 0; p < param_count; ++p) {
            state.m[p] = kBeta1 * state.m[p] + (1.0 - kBeta1) * grad[p];
            state.v[p] = kBeta2 * state.v[p] + (1.0 - kBeta2) * grad[p] * grad[p];
            double m_hat = state.m[p] / bc1;
            double v_hat = state.v[p] / bc2;
            double value = model.get_param(p);
            value -= lr * (m_hat / (std::sqrt(v_hat) + kEpsilon) + config_.weight_decay * value);
            model.set_param(p, value);
        }
        state.step = s + 1;

        if (log != nullptr) {
            nlohmann::ordered_json line{
                {"step", state.step}, {"stage", stage_name},     {"epoch", epoch},
                {"L_bin", breakdown.bin}, {"L_mc", breakdown.mc}, {"L_ctr", breakdown.ctr},
                {"L", breakdown.total},
            };
            (*log) << line.dump() << '\n';
        }
        if (config_.checkpoint_every > 0 && !checkpoint_dir.empty() &&
            state.step % config_.checkpoint_every == 0) {
            save_checkpoint(checkpoint_dir /
                                ("stage_" + stage_name + "_step_" + std::to_string(state.step) +
                                 ".ckpt"),
                            model, &state);
        }
    }
    return state;
}

namespace {

void check_stage_a_origins(const DatasetPartition& stage_a) {
    for (const StatementGroup& group : stage_a.groups) {
        for (const Statement& st : group.statements) {
            if (st.origin != Origin::kb_original && st.origin != Origin::kb_perturbed) {
                throw InvalidArgument("stage A expects KB-derived groups; statement '" +
                                      st.source_id + "' has origin " + to_string(st.origin));
            }
        }
    }
}

} // namespace

VerifierModel Trainer::run_pipeline(const DatasetPartition& stage_a,
                                    const DatasetPartition& stage_b, std::ostream* log,
                                    const std::filesystem::path& checkpoint_dir) {
    check_stage_a_origins(stage_a);
    VerifierModel model = initialize(stage_a, stage_b);
    train_stage(model, stage_a, 'a', log, checkpoint_dir);
    train_stage(model, stage_b, 'b', log, checkpoint_dir);
    return model;
}

void Trainer::resume_pipeline(VerifierModel& model, const TrainState& state,
                              const DatasetPartition& stage_a, const DatasetPartition& stage_b,
                              std::ostream* log, const std::filesystem::path& checkpoint_dir) {
    if (state.stage == 'a') {
        train_stage(model, stage_a, 'a', log, checkpoint_dir, &state);
        train_stage(model, stage_b, 'b', log, checkpoint_dir);
    } else {
        train_stage(model, stage_b, 'b', log, checkpoint_dir, &state);
    }
}

} // namespace verity

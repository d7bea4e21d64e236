// Acceptance gate: one self-contained check per numbered criterion, each
// printing a single [PASS]/[FAIL] line with its runtime. Run with no
// arguments for the full gate or with criterion numbers to select.

#include "verity/batching.hpp"
#include "verity/calibration.hpp"
#include "verity/checkpoint.hpp"
#include "verity/errors.hpp"
#include "verity/filter.hpp"
#include "verity/forge.hpp"
#include "verity/jsonl.hpp"
#include "verity/metrics.hpp"
#include "verity/model.hpp"
#include "verity/numeric.hpp"
#include "verity/objectives.hpp"
#include "verity/rng.hpp"
#include "verity/synthetic.hpp"
#include "verity/trainer.hpp"

#include "support/build.hpp"
#include "support/gradients.hpp"
#include "support/oracles.hpp"
#include "support/tmpdir.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace verity;
using namespace verity::testing;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailure(message);
}

void require_near(double got, double want, double tolerance, const std::string& what) {
    if (!(std::abs(got - want) <= tolerance)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << what << ": got " << got << ", want " << want
            << " (tolerance " << tolerance << ")";
        throw CheckFailure(msg.str());
    }
}

// ---------------------------------------------------------------- criterion 1

std::string closed_form_losses() {
    // Skewed four-way group: one correct at 0.8, three incorrect at 0.2.
    Batch skewed = direct_batch({group("skew", GroupKind::multiple_choice,
                                       {stmt("a", true), stmt("b", false), stmt("c", false),
                                        stmt("d", false)})});
    std::vector<double> skewed_scores{0.8, 0.2, 0.2, 0.2};
    require_near(binary_loss(skewed, skewed_scores), 2.0 * std::log(1.25), 1e-9,
                 "skewed-group binary loss");

    // Boolean singleton at exactly 0.5.
    Batch single = direct_batch({bool_group("lone", true)});
    std::vector<double> half{0.5};
    require_near(binary_loss(single, half), std::log(2.0), 1e-12, "boolean binary loss");

    // Uniform logits: multi-class loss is ln C.
    for (std::size_t c : {2, 3, 4, 5, 8}) {
        Batch batch = direct_batch({mc_group("uniform", c)});
        std::vector<double> logits(c, 0.0);
        require_near(multiclass_loss(batch, logits), std::log(static_cast<double>(c)), 1e-12,
                     "uniform multi-class loss at C=" + std::to_string(c));
    }

    // Identical representations: every contributing anchor costs ln 2.
    Batch trio = direct_batch(
        {bool_group("p1", true), bool_group("p2", true), bool_group("n1", false)});
    std::vector<std::vector<double>> same(3, std::vector<double>{0.3, 0.4});
    require_near(contrastive_loss(trio, same, 0.05), std::log(2.0), 1e-9,
                 "equal-representation contrastive loss");
    return "hand-built losses match their closed forms";
}

// ---------------------------------------------------------------- criterion 2

Batch random_batch(Rng& rng, const std::vector<std::string>& words) {
    auto text = [&]() {
        std::size_t len = 2 + rng.below(3);
        std::string out;
        for (std::size_t i = 0; i < len; ++i) {
            if (i > 0) out += ' ';
            out += words[rng.below(words.size())];
        }
        return out;
    };
    std::vector<StatementGroup> groups;
    std::size_t n_groups = 2 + rng.below(2);
    for (std::size_t g = 0; g < n_groups; ++g) {
        std::string id = "g" + std::to_string(g);
        if (rng.below(3) == 0) {
            groups.push_back(group(id, GroupKind::boolean,
                                   {stmt(text(), rng.below(2) == 1, Origin::boolean)}));
        } else {
            std::size_t width = 2 + rng.below(3);
            std::size_t correct = rng.below(width);
            std::vector<Statement> statements;
            for (std::size_t i = 0; i < width; ++i) {
                statements.push_back(stmt(text(), i == correct));
            }
            groups.push_back(group(id, GroupKind::multiple_choice, std::move(statements)));
        }
    }
    return direct_batch(std::move(groups));
}

std::string gradient_check() {
    const std::vector<std::string> words{"tide", "ember", "quill", "mossy", "brink", "lark"};
    LossWeights weights;
    const double step = 1e-4;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(1000 + trial);
        Vocabulary vocab = Vocabulary::build({"tide ember quill mossy brink lark"}, 0);
        VerifierModel model =
            VerifierModel::make_reference(std::move(vocab), 8, 16, 7000 + trial);
        require(model.param_count() <= 1000, "reference gradient model exceeds 1k parameters");
        for (std::size_t c = 0; c < 8; ++c) model.head().weight[c] = 0.3 * rng.normal();
        model.head().bias = 0.1 * rng.normal();

        Batch batch = random_batch(rng, words);
        std::vector<double> analytic = analytic_grad(model, batch, weights);
        std::vector<double> numeric = numeric_grad(model, batch, weights, step);
        for (std::size_t p = 0; p < analytic.size(); ++p) {
            double denom = std::max(1e-4, std::abs(analytic[p]) + std::abs(numeric[p]));
            double rel = std::abs(analytic[p] - numeric[p]) / denom;
            worst = std::max(worst, rel);
            if (rel >= 1e-4) {
                std::ostringstream msg;
                msg << std::setprecision(17) << "trial " << trial << " param " << p
                    << ": analytic " << analytic[p] << " vs numeric " << numeric[p]
                    << " (rel " << rel << ")";
                throw CheckFailure(msg.str());
            }
        }
    }
    std::ostringstream detail;
    detail << std::setprecision(3) << "20 batches, max relative error " << worst;
    return detail.str();
}

// ---------------------------------------------------------------- criterion 3

std::string metric_oracles() {
    Rng rng(31337);
    auto draw = [&](std::size_t n, std::vector<double>& scores, std::vector<int>& labels) {
        scores.resize(n);
        labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = rng.below(2) == 0 ? rng.uniform() : 0.1 * rng.below(11);
            labels[i] = rng.below(2) == 0 ? 0 : 1;
        }
    };
    std::vector<double> scores;
    std::vector<int> labels;

    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 2 + rng.below(199);
        draw(n, scores, labels);
        labels[0] = 1;
        labels[n - 1] = 0;
        require_near(auroc(scores, labels), auroc_oracle(scores, labels), 1e-12,
                     "auroc vs oracle on instance " + std::to_string(i));
    }
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 1 + rng.below(200);
        draw(n, scores, labels);
        labels[0] = 1;
        require_near(average_precision(scores, labels), ap_oracle(scores, labels), 1e-12,
                     "average_precision vs oracle on instance " + std::to_string(i));
    }
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 1 + rng.below(200);
        std::size_t m = 1 + rng.below(15);
        draw(n, scores, labels);
        CalibrationConfig width{m, Binning::equal_width};
        CalibrationConfig mass{m, Binning::equal_mass};
        require_near(compute_ece(scores, labels, width), ece_oracle(scores, labels, m, true),
                     1e-12, "equal-width ece vs oracle on instance " + std::to_string(i));
        require_near(compute_ece(scores, labels, mass), ece_oracle(scores, labels, m, false),
                     1e-12, "equal-mass ece vs oracle on instance " + std::to_string(i));
    }
    return "auroc, average precision, and both ece binnings match brute force on 1000 "
           "instances each";
}

// ---------------------------------------------------------------- criterion 4

struct FixtureScores {
    std::vector<ScoredGroup> mc;
    std::vector<ScoredStatement> booleans;
    std::vector<double> logits;
    std::vector<int> labels;
};

FixtureScores fixture_scores() {
    Rng rng(808);
    FixtureScores fx;
    for (int g = 0; g < 60; ++g) {
        ScoredGroup sg;
        sg.group_id = "mc" + std::to_string(g);
        sg.kind = GroupKind::multiple_choice;
        std::size_t width = 2 + rng.below(4);
        std::size_t correct = rng.below(width);
        for (std::size_t i = 0; i < width; ++i) {
            ScoredStatement st;
            st.statement.text = sg.group_id + " " + std::to_string(i);
            st.statement.label = i == correct;
            st.logit = 2.0 * rng.normal();
            sg.statements.push_back(st);
        }
        fx.mc.push_back(std::move(sg));
    }
    for (int b = 0; b < 40; ++b) {
        ScoredStatement st;
        st.statement.text = "bool " + std::to_string(b);
        st.statement.label = rng.below(2) == 1;
        st.logit = 2.0 * rng.normal();
        fx.booleans.push_back(st);
    }
    return fx;
}

void apply_temperature(FixtureScores& fx, double t) {
    fx.logits.clear();
    fx.labels.clear();
    auto scale = [&](ScoredStatement& st) {
        st.score = sigmoid(st.logit / t);
        st.predicted = st.logit > 0.0;
        fx.logits.push_back(st.logit);
        fx.labels.push_back(st.statement.label ? 1 : 0);
    };
    for (ScoredGroup& sg : fx.mc) {
        for (ScoredStatement& st : sg.statements) scale(st);
    }
    for (ScoredStatement& st : fx.booleans) scale(st);
}

std::string calibration_invariance() {
    FixtureScores fx = fixture_scores();
    apply_temperature(fx, 1.0);

    McAccuracy mc_before = accuracy_mc(fx.mc);
    double bool_before = accuracy_bool(fx.booleans);
    std::vector<double> scores_before;
    for (const ScoredGroup& sg : fx.mc) {
        for (const ScoredStatement& st : sg.statements) scores_before.push_back(st.score);
    }
    for (const ScoredStatement& st : fx.booleans) scores_before.push_back(st.score);
    double auroc_before = auroc(scores_before, fx.labels);
    double ap_before = average_precision(scores_before, fx.labels);

    CalibrationConfig config{10, Binning::equal_mass};
    CalibrationArtifact artifact = fit_temperature(fx.logits, fx.labels, config, "fixture");
    require(artifact.ece_after <= artifact.ece_before, "fitting worsened ece on the fitting set");

    apply_temperature(fx, artifact.temperature);
    McAccuracy mc_after = accuracy_mc(fx.mc);
    double bool_after = accuracy_bool(fx.booleans);
    std::vector<double> scores_after;
    for (const ScoredGroup& sg : fx.mc) {
        for (const ScoredStatement& st : sg.statements) scores_after.push_back(st.score);
    }
    for (const ScoredStatement& st : fx.booleans) scores_after.push_back(st.score);

    require(mc_after.accuracy == mc_before.accuracy, "acc_mc moved under temperature scaling");
    require(mc_after.tied_groups == mc_before.tied_groups,
            "mc tie count moved under temperature scaling");
    require(bool_after == bool_before, "acc_bool moved under temperature scaling");
    require(auroc(scores_after, fx.labels) == auroc_before,
            "auroc moved under temperature scaling");
    require(average_precision(scores_after, fx.labels) == ap_before,
            "average precision moved under temperature scaling");

    std::ostringstream detail;
    detail << std::setprecision(4) << "T=" << artifact.temperature << ", ece "
           << artifact.ece_before << " -> " << artifact.ece_after
           << ", rank metrics bit-identical";
    return detail.str();
}

// ---------------------------------------------------------------- criterion 5

std::string overfit_sanity() {
    SyntheticSpec kb_spec;
    kb_spec.name = "kb";
    kb_spec.style = SyntheticStyle::kb;
    kb_spec.n_groups = 200;
    kb_spec.stage = Stage::stage_a;
    DatasetPartition a = generate_synthetic_corpus(kb_spec, 501);

    SyntheticSpec qa_spec;
    qa_spec.name = "qa";
    qa_spec.style = SyntheticStyle::qa;
    qa_spec.n_groups = 50;
    qa_spec.stage = Stage::stage_b;
    DatasetPartition b = generate_synthetic_corpus(qa_spec, 502);

    TrainConfig config;
    config.stage_a.steps = 2000;
    config.stage_a.learning_rate = 1e-3;
    config.stage_b.steps = 2000;
    config.stage_b.learning_rate = 1e-3;
    config.seed = 9;
    Trainer trainer(config);
    VerifierModel model = trainer.run_pipeline(a, b);

    std::vector<ScoredGroup> mc;
    std::vector<ScoredStatement> booleans;
    for (const DatasetPartition* part : {&a, &b}) {
        for (const StatementGroup& group : part->groups) {
            if (group.kind == GroupKind::boolean) {
                for (const ScoredStatement& st : model.score_group(group)) {
                    booleans.push_back(st);
                }
                continue;
            }
            ScoredGroup sg;
            sg.group_id = group.group_id;
            sg.kind = group.kind;
            sg.statements = model.score_group(group);
            mc.push_back(std::move(sg));
        }
    }
    McAccuracy acc = accuracy_mc(mc);
    double acc_bool = accuracy_bool(booleans);
    require(acc.accuracy == 1.0, "training acc_mc fell short of 1.0: got " +
                                     std::to_string(acc.accuracy) + " with " +
                                     std::to_string(acc.tied_groups) + " tied groups");
    require(acc_bool >= 0.95,
            "training acc_bool fell short of 0.95: got " + std::to_string(acc_bool));
    std::ostringstream detail;
    detail << std::setprecision(4) << "acc_mc=1.0 over " << mc.size() << " groups, acc_bool="
           << acc_bool << " over " << booleans.size() << " statements";
    return detail.str();
}

// ---------------------------------------------------------------- criterion 6

std::string conversion_fidelity() {
    MultipleChoiceProblem cannon;
    cannon.id = "cannon";
    cannon.question = "What would someone wear to protect themselves from a cannon?";
    cannon.choices = {"ungulate", "bomber", "body armor", "tank", "hat"};
    cannon.answer_index = 2;
    cannon.form = QuestionForm::interrogative;
    StatementGroup cannon_group = convert_multiple_choice(cannon);
    const std::vector<std::string> expected{
        "Someone would wear an ungulate to protect themselves from a cannon.",
        "Someone would wear a bomber to protect themselves from a cannon.",
        "Someone would wear body armor to protect themselves from a cannon.",
        "Someone would wear a tank to protect themselves from a cannon.",
        "Someone would wear a hat to protect themselves from a cannon.",
    };
    require(cannon_group.statements.size() == expected.size(),
            "cannon group has the wrong width");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        require(cannon_group.statements[i].text == expected[i],
                "cannon statement " + std::to_string(i) + " diverged: '" +
                    cannon_group.statements[i].text + "'");
        require(cannon_group.statements[i].label == (i == 2), "cannon labels misplaced");
    }

    BooleanProblem dog;
    dog.id = "dog";
    dog.question = "Can an average dog follow an instruction manual?";
    dog.answer = false;
    StatementGroup dog_group = convert_boolean(dog);
    require(dog_group.statements.size() == 1, "dog conversion is not a singleton");
    require(dog_group.statements[0].text == "An average dog can follow an instruction manual.",
            "dog statement diverged: '" + dog_group.statements[0].text + "'");
    require(!dog_group.statements[0].label, "dog label should be false");

    KBEntry stamps;
    stamps.id = "stamps";
    stamps.subject = "Rubber stamps";
    stamps.text = "Rubber stamps provide a way to make messages stand out.";
    std::vector<std::string> pool{"Arabic numbers", "Bandages", "Meat tenderizers"};
    Rng rng(7);
    StatementGroup perturbed = perturb_kb_entry(stamps, pool, 3, rng);
    require(perturbed.statements.size() == 4, "perturbation group has the wrong width");
    require(perturbed.statements[0].text == stamps.text && perturbed.statements[0].label,
            "perturbation must keep the original first");
    std::set<std::string> rest;
    for (std::size_t i = 1; i < 4; ++i) {
        require(!perturbed.statements[i].label, "perturbed statements must be incorrect");
        rest.insert(perturbed.statements[i].text);
    }
    std::set<std::string> want{
        "Arabic numbers provide a way to make messages stand out.",
        "Bandages provide a way to make messages stand out.",
        "Meat tenderizers provide a way to make messages stand out.",
    };
    require(rest == want, "perturbed subject swaps diverged");

    KnowledgeTriple wait;
    wait.id = "wait";
    wait.head = "PersonX doesn't like to wait";
    wait.relation = "xIntent";
    wait.tail = "to get the job done";
    wait.valid = 1;
    Rng skd_rng(1);
    Statement arnold = render_skd_triple(wait, {"Arnold"}, skd_rng);
    require(arnold.text ==
                "Arnold doesn't like to wait. Because Arnold wanted to get the job done.",
            "skd rendering diverged: '" + arnold.text + "'");
    require(arnold.label, "a valid triple renders as a correct statement");
    return "cannon, dog, rubber-stamps, and skd conversions are byte-exact";
}

// ---------------------------------------------------------------- criterion 7

void sh(const std::string& command) {
    int status = std::system(command.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code != 0) {
        throw CheckFailure("command failed (exit " + std::to_string(code) + "): " + command);
    }
}

std::string slurp_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckFailure("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string pipeline_determinism() {
    const std::string bin = VERITY_BIN;
    TempDir scratch;
    auto quiet = [](const std::filesystem::path& log) { return " >> " + log.string() + " 2>&1"; };
    for (const char* run : {"run1", "run2"}) {
        std::filesystem::path dir = scratch.path / run;
        std::filesystem::create_directories(dir);
        auto log = dir / "shell.log";
        auto at = [&](const char* name) { return (dir / name).string(); };
        sh(bin + " forge synth --style kb --n-groups 40 --stage a --seed 21 --out " +
           at("a.jsonl") + quiet(log));
        sh(bin + " forge synth --style qa --n-groups 20 --stage b --seed 22 --out " +
           at("b.jsonl") + quiet(log));
        sh(bin + " forge synth --style qa --n-groups 10 --boolean-fraction 0 --stage b "
                 "--seed 23 --out " +
           at("eval_mc.jsonl") + quiet(log));
        sh(bin + " forge synth --style qa --n-groups 10 --boolean-fraction 1 --stage b "
                 "--seed 24 --out " +
           at("eval_bool.jsonl") + quiet(log));
        {
            std::ofstream config(dir / "train.cfg", std::ios::binary);
            config << "seed = 9\ndim = 32\nmax_tokens = 32\ngroups_per_batch = 16\n"
                   << "cap_per_group = 4\nsteps_a = 40\nsteps_b = 20\n"
                   << "lr_a = 0.002\nlr_b = 0.002\n";
        }
        {
            std::ofstream manifest(dir / "manifest.json", std::ios::binary);
            manifest
                << R"({"benchmarks":[)"
                << R"({"name":"synth_mc","path":"eval_mc.jsonl","kind":"multiple_choice","balanced":false},)"
                << R"({"name":"synth_bool","path":"eval_bool.jsonl","kind":"boolean","balanced":true})"
                << R"(]})";
        }
        sh(bin + " train --stage-a " + at("a.jsonl") + " --stage-b " + at("b.jsonl") +
           " --config " + at("train.cfg") + " --out " + at("out") + quiet(log));
        sh(bin + " evaluate --manifest " + at("manifest.json") + " --model " +
           (dir / "out" / "model.ckpt").string() + " --out " + at("report.json") +
           " --out-scores " + at("scores.jsonl") + quiet(log));
        sh(bin + " calibrate --scores " + at("scores.jsonl") + " --out " + at("calib.json") +
           quiet(log));
        sh(bin + " evaluate --manifest " + at("manifest.json") + " --model " +
           (dir / "out" / "model.ckpt").string() + " --calibration " + at("calib.json") +
           " --out " + at("report_calibrated.json") + quiet(log));
    }
    std::size_t bytes = 0;
    for (const char* name : {"out/model.ckpt", "out/train_log.jsonl", "report.json",
                             "scores.jsonl", "calib.json", "report_calibrated.json"}) {
        std::string first = slurp_file(scratch.path / "run1" / name);
        std::string second = slurp_file(scratch.path / "run2" / name);
        require(!first.empty(), std::string(name) + " is empty");
        require(first == second, std::string(name) + " differs between identical runs");
        bytes += first.size();
    }
    std::ostringstream detail;
    detail << "two seeded pipeline runs byte-identical across 6 artifacts (" << bytes
           << " bytes compared)";
    return detail.str();
}

// ---------------------------------------------------------------- criterion 8

std::string filter_contract() {
    // A zero-initialized head scores everything exactly 0.5, which the strict
    // threshold must drop.
    Vocabulary flat_vocab = Vocabulary::build({"genuine bogus filler"}, 0);
    VerifierModel flat = VerifierModel::make_reference(std::move(flat_vocab), 8, 16, 3);
    std::vector<std::string> texts{"genuine filler", "bogus filler"};
    FilterResult at_half = filter_knowledge(texts, flat, 0.5);
    require(at_half.kept.empty(), "scores of exactly 0.5 leaked past the strict threshold");
    require(at_half.dropped.size() == texts.size(), "dropped side must absorb boundary scores");

    // Point the head along the difference of two word representations so the
    // two classes land on opposite sides of 0.5.
    Vocabulary split_vocab = Vocabulary::build({"genuine bogus filler"}, 0);
    VerifierModel split = VerifierModel::make_reference(std::move(split_vocab), 8, 16, 3);
    std::vector<double> pos = split.representation("genuine filler");
    std::vector<double> neg = split.representation("bogus filler");
    for (std::size_t c = 0; c < 8; ++c) {
        split.head().weight[c] = pos[c] - neg[c];
        split.head().bias -= 0.5 * (pos[c] - neg[c]) * (pos[c] + neg[c]);
    }
    std::vector<std::string> candidates{
        "genuine filler", "bogus filler", "genuine filler genuine", "bogus filler bogus"};
    std::vector<ScoredStatement> scored = score_statements(candidates, split);
    require(scored[0].score > 0.5 && scored[2].score > 0.5,
            "fixture model fails to push the genuine side above 0.5");
    require(scored[1].score < 0.5 && scored[3].score < 0.5,
            "fixture model fails to push the bogus side below 0.5");

    FilterResult result = filter_knowledge(candidates, split, 0.5);
    std::vector<std::string> want_kept{"genuine filler", "genuine filler genuine"};
    std::vector<std::string> want_dropped{"bogus filler", "bogus filler bogus"};
    require(result.kept == want_kept, "kept side is not exactly the strictly-above set");
    require(result.dropped == want_dropped, "dropped side is not exactly the complement");
    require(result.kept.size() + result.dropped.size() == candidates.size(),
            "kept and dropped must partition the input");
    return "strict 0.5 threshold partitions known scores exactly";
}

// ---------------------------------------------------------------- criterion 9

std::string exclusion_rules() {
    LossWeights weights;

    // Boolean-only batch: no multi-class contribution.
    Batch booleans = direct_batch(
        {bool_group("b1", true), bool_group("b2", false), bool_group("b3", true)});
    std::vector<double> logits{0.4, -0.2, 1.1};
    require(multiclass_loss(booleans, logits) == 0.0,
            "boolean-only batch produced a multi-class loss");
    std::vector<std::vector<double>> reprs{{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
    LossBreakdown breakdown = combined_loss(booleans, logits, reprs, weights);
    require(breakdown.mc == 0.0, "combined loss kept a multi-class term");
    require(breakdown.mc_group_count == 0, "no group should contribute to the mc term");

    // Opposite-label pair: both anchors lack positives, so the contrastive
    // term vanishes.
    Batch pair = direct_batch({bool_group("t", true), bool_group("f", false)});
    std::vector<double> pair_logits{0.3, -0.3};
    std::vector<std::vector<double>> pair_reprs{{1.0, 0.2}, {0.2, 1.0}};
    require(contrastive_loss(pair, pair_reprs, weights.tau) == 0.0,
            "empty-positive anchors contributed to the contrastive loss");
    LossBreakdown pair_breakdown = combined_loss(pair, pair_logits, pair_reprs, weights);
    require(pair_breakdown.ctr == 0.0, "combined loss kept a contrastive term");
    require(pair_breakdown.ctr_anchor_count == 0, "no anchor should contribute");

    // Mixed labels: only the anchors with a non-empty positive set count.
    Batch trio = direct_batch(
        {bool_group("t", true), bool_group("f1", false), bool_group("f2", false)});
    std::vector<double> trio_logits{0.1, 0.2, 0.3};
    std::vector<std::vector<double>> same(3, std::vector<double>{0.6, 0.8});
    LossBreakdown trio_breakdown = combined_loss(trio, trio_logits, same, weights);
    require(trio_breakdown.ctr_anchor_count == 2,
            "exactly the two false anchors should contribute");
    require_near(trio_breakdown.ctr, std::log(2.0), 1e-9,
                 "skipped anchors must not shift the contributing average");
    return "mc skips boolean-only batches; contrastive skips empty-positive anchors";
}

// -------------------------------------------------------------------- driver

struct Criterion {
    int number;
    double budget_seconds;
    std::function<std::string()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, 1.0, closed_form_losses},
        {2, 30.0, gradient_check},
        {3, 30.0, metric_oracles},
        {4, 5.0, calibration_invariance},
        {5, 300.0, overfit_sanity},
        {6, 1.0, conversion_fidelity},
        {7, 600.0, pipeline_determinism},
        {8, 1.0, filter_contract},
        {9, 1.0, exclusion_rules},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        int number = std::atoi(argv[i]);
        bool known = false;
        for (const Criterion& c : criteria) known = known || c.number == number;
        if (!known) {
            std::cerr << "unknown criterion '" << argv[i] << "' (valid: 1-"
                      << criteria.size() << ")\n";
            return 2;
        }
        selected.push_back(number);
    }

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.number) == selected.end()) {
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = true;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            passed = false;
            detail = e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (passed && elapsed > criterion.budget_seconds) {
            passed = false;
            std::ostringstream over;
            over << std::fixed << std::setprecision(2) << "runtime " << elapsed
                 << "s exceeded the " << criterion.budget_seconds << "s budget";
            detail = over.str();
        }
        std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion.number << " ("
                  << std::fixed << std::setprecision(2) << elapsed << "s): " << detail << "\n";
        if (!passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

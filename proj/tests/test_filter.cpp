#include "verity/errors.hpp"
#include "verity/filter.hpp"
#include "verity/jsonl.hpp"
#include "verity/synthetic.hpp"
#include "verity/trainer.hpp"

#include "support/build.hpp"
#include "support/tmpdir.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

using namespace verity;
using namespace verity::testing;

namespace {

VerifierModel zero_head_model() {
    Vocabulary vocab = Vocabulary::build({"one two three", "four five six"}, 0);
    return VerifierModel::make_reference(std::move(vocab), 8, 16, 9);
}

// Small model trained on the separable synthetic corpus, so scores straddle
// the 0.5 boundary along the truth/falsehood keyword split.
VerifierModel trained_model() {
    SyntheticSpec kb_spec;
    kb_spec.name = "kb";
    kb_spec.style = SyntheticStyle::kb;
    kb_spec.n_groups = 24;
    kb_spec.stage = Stage::stage_a;
    DatasetPartition a = generate_synthetic_corpus(kb_spec, 11);

    SyntheticSpec qa_spec;
    qa_spec.name = "qa";
    qa_spec.style = SyntheticStyle::qa;
    qa_spec.n_groups = 12;
    qa_spec.stage = Stage::stage_b;
    DatasetPartition b = generate_synthetic_corpus(qa_spec, 12);

    TrainConfig config;
    config.stage_a.steps = 120;
    config.stage_a.learning_rate = 5e-3;
    config.stage_b.steps = 40;
    config.stage_b.learning_rate = 5e-3;
    config.batch.groups_per_batch = 8;
    config.batch.cap_per_group = 4;
    config.batch.max_tokens = 32;
    config.seed = 3;
    config.dim = 24;
    Trainer trainer(config);
    return trainer.run_pipeline(a, b);
}

std::vector<std::string> partition_texts(const DatasetPartition& part, bool label) {
    std::vector<std::string> texts;
    for (const StatementGroup& group : part.groups) {
        for (const Statement& st : group.statements) {
            if (st.label == label) texts.push_back(st.text);
        }
    }
    return texts;
}

} // namespace

TEST_CASE("scoring preserves order and stays in the open unit interval") {
    VerifierModel model = zero_head_model();
    std::vector<std::string> texts{"one two", "three four", "five six"};
    std::vector<ScoredStatement> scored = score_statements(texts, model);
    REQUIRE(scored.size() == texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        CHECK(scored[i].statement.text == texts[i]);
        CHECK(scored[i].score > 0.0);
        CHECK(scored[i].score < 1.0);
    }
    std::vector<ScoredStatement> again = score_statements(texts, model);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        CHECK(again[i].score == scored[i].score);
        CHECK(again[i].logit == scored[i].logit);
    }
}

TEST_CASE("the half point is excluded from the kept side") {
    // A zero head scores everything exactly 0.5; strictly-above keeps nothing.
    VerifierModel model = zero_head_model();
    std::vector<std::string> texts{"one two", "three four", "five six"};
    FilterResult result = filter_knowledge(texts, model, 0.5);
    CHECK(result.kept.empty());
    CHECK(result.dropped.size() == texts.size());
    CHECK(result.scored.size() == texts.size());
}

TEST_CASE("a trained model splits the synthetic corpus at the boundary") {
    VerifierModel model = trained_model();

    SyntheticSpec holdout_spec;
    holdout_spec.name = "holdout";
    holdout_spec.style = SyntheticStyle::kb;
    holdout_spec.n_groups = 12;
    holdout_spec.stage = Stage::eval_only;
    DatasetPartition holdout = generate_synthetic_corpus(holdout_spec, 99);

    std::vector<std::string> truths = partition_texts(holdout, true);
    std::vector<std::string> lies = partition_texts(holdout, false);
    std::vector<std::string> all;
    all.insert(all.end(), truths.begin(), truths.end());
    all.insert(all.end(), lies.begin(), lies.end());

    FilterResult result = filter_knowledge(all, model, 0.5);
    CHECK_FALSE(result.kept.empty());
    CHECK_FALSE(result.dropped.empty());
    CHECK(result.kept.size() + result.dropped.size() == all.size());

    // The partition is exactly the strict-threshold split of the scores.
    std::vector<std::string> expect_kept;
    std::vector<std::string> expect_dropped;
    for (const ScoredStatement& st : result.scored) {
        (st.score > 0.5 ? expect_kept : expect_dropped).push_back(st.statement.text);
    }
    CHECK(result.kept == expect_kept);
    CHECK(result.dropped == expect_dropped);

    // Separable corpus: kept should be dominated by truths.
    std::size_t kept_truths = 0;
    for (const std::string& text : result.kept) {
        if (std::find(truths.begin(), truths.end(), text) != truths.end()) ++kept_truths;
    }
    CHECK(kept_truths * 2 > result.kept.size());
}

TEST_CASE("raising the threshold can only shrink the kept side") {
    VerifierModel model = trained_model();
    SyntheticSpec spec;
    spec.name = "mono";
    spec.style = SyntheticStyle::kb;
    spec.n_groups = 8;
    spec.stage = Stage::eval_only;
    DatasetPartition data = generate_synthetic_corpus(spec, 1234);
    std::vector<std::string> texts = partition_texts(data, true);
    std::vector<std::string> lies = partition_texts(data, false);
    texts.insert(texts.end(), lies.begin(), lies.end());

    FilterResult loose = filter_knowledge(texts, model, 0.3);
    FilterResult tight = filter_knowledge(texts, model, 0.7);
    CHECK(tight.kept.size() <= loose.kept.size());
    for (const std::string& text : tight.kept) {
        CHECK(std::find(loose.kept.begin(), loose.kept.end(), text) != loose.kept.end());
    }
}

TEST_CASE("thresholds must be finite") {
    VerifierModel model = zero_head_model();
    std::vector<std::string> texts{"one"};
    CHECK_THROWS_AS(filter_knowledge(texts, model, std::numeric_limits<double>::quiet_NaN()),
                    InvalidArgument);
    CHECK_THROWS_AS(filter_knowledge(texts, model, std::numeric_limits<double>::infinity()),
                    InvalidArgument);
}

TEST_CASE("empty input filters to empty output") {
    VerifierModel model = zero_head_model();
    std::vector<std::string> none;
    FilterResult result = filter_knowledge(none, model, 0.5);
    CHECK(result.kept.empty());
    CHECK(result.dropped.empty());
    CHECK(result.scored.empty());
}

TEST_CASE("plain statement files read one line at a time") {
    TempDir dir;
    auto path = dir.file("facts.txt");
    {
        std::ofstream out(path, std::ios::binary);
        out << "Salt dissolves in water.\n"
            << "\n"
            << "Glass is made from sand.\r\n"
            << "   \n"
            << "Candles need oxygen to burn.";
    }
    std::vector<std::string> lines = read_statement_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "Salt dissolves in water.");
    CHECK(lines[1] == "Glass is made from sand.");
    CHECK(lines[2] == "Candles need oxygen to burn.");
    CHECK_THROWS_AS(read_statement_lines(dir.file("absent.txt")), IoFailure);
}

TEST_CASE("group jsonl files flatten in file order") {
    TempDir dir;
    std::vector<StatementGroup> groups{
        group("g1", GroupKind::multiple_choice,
              {stmt("first statement", true), stmt("second statement", false)}),
        group("g2", GroupKind::boolean, {stmt("third statement", true, Origin::boolean)}),
    };
    auto path = dir.file("groups.jsonl");
    write_group_jsonl(path, groups);
    std::vector<std::string> lines = read_statement_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "first statement");
    CHECK(lines[1] == "second statement");
    CHECK(lines[2] == "third statement");
}

TEST_CASE("statement files are written with lf endings") {
    TempDir dir;
    auto path = dir.file("kept.txt");
    std::vector<std::string> texts{"alpha", "beta"};
    write_statement_lines(path, texts);
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(bytes == "alpha\nbeta\n");
    CHECK(read_statement_lines(path) == texts);
}

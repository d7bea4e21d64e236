#include "verity/adapters.hpp"
#include "verity/errors.hpp"
#include "verity/statement.hpp"

#include "support/tmpdir.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

using namespace verity;
using namespace verity::testing;

namespace {

const std::filesystem::path kData = VERITY_DATA_DIR;

std::vector<StatementGroup> run_on_raw(const std::string& adapter, const std::string& file) {
    ForgeOptions options;
    options.seed = 7;
    return run_adapter(adapter, {kData / "raw" / file}, options);
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    for (const std::string& line : lines) out << line << '\n';
}

} // namespace

TEST_CASE("mcq adapter converts the bundled problems") {
    std::vector<StatementGroup> groups = run_on_raw("mcq", "mcq.jsonl");
    REQUIRE(groups.size() == 8);
    CHECK(groups[0].group_id == "mcq-cannon");
    REQUIRE(groups[0].statements.size() == 5);
    CHECK(groups[0].statements[2].text ==
          "Someone would wear body armor to protect themselves from a cannon.");
    CHECK(groups[0].statements[2].label);
    for (const StatementGroup& g : groups) {
        CHECK(validate_group(g).ok());
        CHECK(g.kind == GroupKind::multiple_choice);
    }
}

TEST_CASE("boolq adapter yields singleton boolean groups") {
    std::vector<StatementGroup> groups = run_on_raw("boolq", "boolq.jsonl");
    REQUIRE(groups.size() == 8);
    CHECK(groups[0].group_id == "boolq-dog");
    CHECK(groups[0].statements[0].text == "An average dog can follow an instruction manual.");
    CHECK_FALSE(groups[0].statements[0].label);
    for (const StatementGroup& g : groups) {
        CHECK(validate_group(g).ok());
        CHECK(g.kind == GroupKind::boolean);
        CHECK(g.statements.size() == 1);
        CHECK(g.statements[0].origin == Origin::boolean);
    }
}

TEST_CASE("kb adapter perturbs with subjects drawn from the whole file") {
    std::vector<StatementGroup> groups = run_on_raw("kb", "kb_entries.jsonl");
    REQUIRE(groups.size() == 6);

    std::set<std::string> file_subjects = {"Rubber stamps", "Arabic numbers", "Bandages",
                                           "Meat tenderizers", "Umbrellas", "Ladders"};
    for (const StatementGroup& g : groups) {
        CHECK(validate_group(g).ok());
        REQUIRE(g.statements.size() == 4);
        CHECK(g.statements[0].origin == Origin::kb_original);
        CHECK(g.statements[0].label);
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK(g.statements[i].origin == Origin::kb_perturbed);
            // Every perturbed statement starts with some other file subject.
            bool found = false;
            for (const std::string& subject : file_subjects) {
                if (g.statements[i].text.rfind(subject, 0) == 0 &&
                    g.statements[i].text != g.statements[0].text) {
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("adapters are deterministic in the seed") {
    CHECK(run_on_raw("kb", "kb_entries.jsonl") == run_on_raw("kb", "kb_entries.jsonl"));
    CHECK(run_on_raw("skd", "skd_triples.jsonl") == run_on_raw("skd", "skd_triples.jsonl"));

    ForgeOptions other;
    other.seed = 8;
    CHECK(run_adapter("kb", {kData / "raw" / "kb_entries.jsonl"}, other) !=
          run_on_raw("kb", "kb_entries.jsonl"));
}

TEST_CASE("skd adapter renders every bundled triple") {
    std::vector<StatementGroup> groups = run_on_raw("skd", "skd_triples.jsonl");
    REQUIRE(groups.size() == 8);
    for (const StatementGroup& g : groups) {
        CHECK(g.kind == GroupKind::boolean);
        CHECK(validate_group(g).ok());
        CHECK(g.statements[0].text.find("PersonX") == std::string::npos);
    }
    // Third-party annotations marked invalid come through as false labels.
    auto lie = std::find_if(groups.begin(), groups.end(), [](const StatementGroup& g) {
        return g.group_id == "skd-lie";
    });
    REQUIRE(lie != groups.end());
    CHECK_FALSE(lie->statements[0].label);
}

TEST_CASE("com2sense adapter pairs complementary sentences") {
    std::vector<StatementGroup> groups = run_on_raw("com2sense", "com2sense.jsonl");
    REQUIRE(groups.size() == 4);
    for (const StatementGroup& g : groups) {
        CHECK(g.kind == GroupKind::multiple_choice);
        CHECK(g.statements.size() == 2);
        CHECK(validate_group(g).ok());
    }
}

TEST_CASE("cycic adapter keeps only multiple-choice items") {
    std::vector<StatementGroup> groups = run_on_raw("cycic", "cycic.jsonl");
    CHECK(groups.size() == 3);
    for (const StatementGroup& g : groups) {
        CHECK(g.kind == GroupKind::multiple_choice);
    }
}

TEST_CASE("comve adapter marks the sensible sentence correct") {
    std::vector<StatementGroup> groups = run_on_raw("comve", "comve.csv");
    REQUIRE(groups.size() == 4);
    for (const StatementGroup& g : groups) {
        CHECK(g.statements.size() == 2);
        CHECK(validate_group(g).ok());
    }
}

TEST_CASE("i2d2 adapter merges input files in argument order") {
    ForgeOptions options;
    options.seed = 7;
    std::vector<StatementGroup> both =
        run_adapter("i2d2", {kData / "raw" / "i2d2_iter0.jsonl", kData / "raw" / "i2d2_iter2.jsonl"},
                    options);
    REQUIRE(both.size() == 8);
    std::vector<StatementGroup> first =
        run_adapter("i2d2", {kData / "raw" / "i2d2_iter0.jsonl"}, options);
    REQUIRE(first.size() == 4);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(both[i] == first[i]);
    }
}

TEST_CASE("mcq adapter augments falsehoods when a sampler is configured") {
    ForgeOptions options;
    options.seed = 7;
    FileAnswerSampler sampler(kData / "raw" / "sampler_stub.json");
    options.sampler = &sampler;

    std::vector<StatementGroup> groups =
        run_adapter("mcq", {kData / "raw" / "mcq.jsonl"}, options);
    REQUIRE(groups.size() == 8);
    // The cannon question has stub answers: three survive the probability cut.
    REQUIRE(groups[0].statements.size() == 8);
    std::size_t falsehoods = 0;
    for (const Statement& s : groups[0].statements) {
        if (s.origin == Origin::lm_falsehood) {
            ++falsehoods;
            CHECK_FALSE(s.label);
        }
    }
    CHECK(falsehoods == 3);
    CHECK(validate_group(groups[0]).ok());
}

TEST_CASE("unknown adapters and arity mistakes are rejected") {
    ForgeOptions options;
    CHECK_THROWS_AS(run_adapter("nope", {kData / "raw" / "mcq.jsonl"}, options), InvalidArgument);
    CHECK_THROWS_AS(
        run_adapter("mcq", {kData / "raw" / "mcq.jsonl", kData / "raw" / "mcq.jsonl"}, options),
        InvalidArgument);
    CHECK_THROWS_AS(run_adapter("i2d2", {}, options), InvalidArgument);
}

TEST_CASE("com2sense rejects an out-of-range correct marker") {
    TempDir dir;
    auto path = dir.file("bad.jsonl");
    write_lines(path, {R"({"id":"x","sent_1":"a","sent_2":"b","correct":3})"});
    ForgeOptions options;
    CHECK_THROWS_AS(run_adapter("com2sense", {path}, options), IoFailure);
}

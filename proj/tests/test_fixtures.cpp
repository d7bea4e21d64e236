#include "verity/digest.hpp"
#include "verity/jsonl.hpp"
#include "verity/report.hpp"
#include "verity/statement.hpp"
#include "verity/tokenizer.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace verity;

namespace {

const std::filesystem::path kFixtures =
    std::filesystem::path(VERITY_DATA_DIR) / "fixtures" / "v1";

std::map<std::string, std::string> read_checksums() {
    std::ifstream in(kFixtures / "CHECKSUMS");
    REQUIRE(in.good());
    std::map<std::string, std::string> pinned;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t gap = line.find("  ");
        REQUIRE(gap == 16);
        pinned[line.substr(gap + 2)] = line.substr(0, gap);
    }
    return pinned;
}

} // namespace

TEST_CASE("every fixture file matches its pinned checksum") {
    std::map<std::string, std::string> pinned = read_checksums();
    CHECK(pinned.size() >= 14);
    for (const auto& [name, digest] : pinned) {
        std::filesystem::path file = kFixtures / name;
        REQUIRE_MESSAGE(std::filesystem::exists(file), name, " is listed but missing");
        CHECK_MESSAGE(to_hex(fnv1a64_file(file)) == digest, name, " drifted from its pin");
    }
}

TEST_CASE("no fixture file escapes the checksum pin") {
    std::map<std::string, std::string> pinned = read_checksums();
    for (const auto& entry : std::filesystem::directory_iterator(kFixtures)) {
        std::string name = entry.path().filename().string();
        if (name == "CHECKSUMS") continue;
        CHECK_MESSAGE(pinned.count(name) == 1, name, " is not pinned in CHECKSUMS");
    }
}

TEST_CASE("every bundled group validates and covers all kinds and origins") {
    std::set<GroupKind> kinds;
    std::set<Origin> origins;
    std::size_t total = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kFixtures)) {
        if (entry.path().extension() != ".jsonl") continue;
        // read_group_jsonl rejects any group that fails validation.
        std::vector<StatementGroup> groups = read_group_jsonl(entry.path());
        CHECK_MESSAGE(!groups.empty(), entry.path().filename().string(), " is empty");
        for (const StatementGroup& group : groups) {
            kinds.insert(group.kind);
            for (const Statement& st : group.statements) origins.insert(st.origin);
            ++total;
        }
    }
    CHECK(total >= 300);
    CHECK(kinds == std::set<GroupKind>{GroupKind::multiple_choice, GroupKind::boolean});
    CHECK(origins == std::set<Origin>{Origin::question_choice, Origin::boolean,
                                      Origin::kb_original, Origin::kb_perturbed,
                                      Origin::lm_falsehood});
}

TEST_CASE("the bundled manifest evaluates offline with a reference model") {
    std::vector<BenchmarkSpec> specs = load_manifest(kFixtures / "manifest.json");
    REQUIRE(specs.size() == 10);
    std::set<std::string> names;
    for (const BenchmarkSpec& spec : specs) {
        CHECK(names.insert(spec.name).second);
        CHECK(std::filesystem::exists(spec.path));
    }

    std::vector<std::string> seed_text{"the ledger is sound", "the kettle is bogus"};
    VerifierModel model =
        VerifierModel::make_reference(Vocabulary::build(seed_text, 512), 16, 32, 5);
    CalibrationConfig ece{10, Binning::equal_mass};
    EvaluationReport report = evaluate_manifest(model, kFixtures / "manifest.json", ece);
    REQUIRE(report.benchmarks.size() == specs.size());
    CHECK(report.macro.count("auroc") == 1);
    CHECK(report.macro.count("ap") == 1);
    CHECK(report.macro.count("ece") == 1);
    for (const BenchmarkMetrics& bm : report.benchmarks) {
        CHECK(bm.n_groups > 0);
        CHECK(bm.n_statements > 0);
    }
}

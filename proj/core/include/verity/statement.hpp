#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace verity {

// Where a statement came from.
enum class Origin {
    question_choice, // QA question combined with one answer choice
    boolean,         // yes/no question rewritten as a declarative
    kb_original,     // knowledge base entry kept as-is
    kb_perturbed,    // knowledge base entry with the subject swapped out
    lm_falsehood,    // statement built from a sampled wrong answer
};

enum class GroupKind {
    multiple_choice, // >= 2 statements, exactly one correct
    boolean,         // a single statement, correct or not
};

enum class Stage {
    stage_a,
    stage_b,
    eval_only,
};

struct Statement {
    std::string text;
    bool label = false;
    std::string source_id;
    Origin origin = Origin::question_choice;

    bool operator==(const Statement&) const = default;
};

struct StatementGroup {
    std::string group_id;
    GroupKind kind = GroupKind::multiple_choice;
    std::vector<Statement> statements;

    bool operator==(const StatementGroup&) const = default;

    // Index of the single correct statement. Only meaningful on a group that
    // passed validation.
    std::size_t correct_index() const;
};

struct DatasetPartition {
    std::string name;
    Stage stage = Stage::stage_a;
    std::vector<StatementGroup> groups;
};

struct ScoredStatement {
    Statement statement;
    double logit = 0.0;
    double score = 0.0;
    bool predicted = false;
};

struct Violation {
    std::string invariant;
    std::string detail;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Structural checks: group id non-empty, statement texts non-empty after
// trimming, no duplicate texts within the group, kind-specific shape
// (multiple_choice: >= 2 statements with exactly one correct; boolean:
// exactly one statement).
ValidationResult validate_group(const StatementGroup& group);

// Throwing wrapper: raises InvalidGroup naming the first violation.
void require_valid(const StatementGroup& group);

const char* to_string(Origin origin);
const char* to_string(GroupKind kind);
const char* to_string(Stage stage);
Origin origin_from_string(std::string_view text);
GroupKind kind_from_string(std::string_view text);
Stage stage_from_string(std::string_view text);

std::string_view trim(std::string_view text);

} // namespace verity

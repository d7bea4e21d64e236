#include "verity/statement.hpp"

#include "verity/errors.hpp"

#include <algorithm>
#include <cctype>

namespace verity {

namespace {

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string_view trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::size_t StatementGroup::correct_index() const {
    for (std::size_t i = 0; i < statements.size(); ++i) {
        if (statements[i].label) return i;
    }
    return statements.size();
}

ValidationResult validate_group(const StatementGroup& group) {
    ValidationResult result;
    auto add = [&](std::string invariant, std::string detail) {
        result.violations.push_back({std::move(invariant), std::move(detail)});
    };

    if (trim(group.group_id).empty()) {
        add("group_id_nonempty", "group id is empty");
    }
    if (group.statements.empty()) {
        add("statements_nonempty", "group has no statements");
        return result;
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < group.statements.size(); ++i) {
        const Statement& st = group.statements[i];
        if (trim(st.text).empty()) {
            add("statement_text_nonempty",
                "statement " + std::to_string(i) + " is empty after trimming");
        }
        if (st.label) ++correct;
    }

    std::vector<std::string> texts;
    texts.reserve(group.statements.size());
    for (const Statement& st : group.statements) texts.push_back(st.text);
    std::sort(texts.begin(), texts.end());
    auto dup = std::adjacent_find(texts.begin(), texts.end());
    if (dup != texts.end()) {
        add("statement_texts_distinct", "duplicate statement text: " + *dup);
    }

    switch (group.kind) {
    case GroupKind::multiple_choice:
        if (group.statements.size() < 2) {
            add("multiple_choice_size", "multiple_choice group needs >= 2 statements");
        }
        if (correct != 1) {
            add("multiple_choice_one_correct",
                "expected exactly 1 correct statement, found " + std::to_string(correct));
        }
        break;
    case GroupKind::boolean:
        if (group.statements.size() != 1) {
            add("boolean_singleton", "boolean group needs exactly 1 statement, found " +
                                         std::to_string(group.statements.size()));
        }
        break;
    }
    return result;
}

void require_valid(const StatementGroup& group) {
    ValidationResult result = validate_group(group);
    if (!result.ok()) {
        const Violation& v = result.violations.front();
        throw InvalidGroup("group '" + group.group_id + "': " + v.invariant + ": " + v.detail);
    }
}

const char* to_string(Origin origin) {
    switch (origin) {
    case Origin::question_choice: return "question_choice";
    case Origin::boolean: return "boolean";
    case Origin::kb_original: return "kb_original";
    case Origin::kb_perturbed: return "kb_perturbed";
    case Origin::lm_falsehood: return "lm_falsehood";
    }
    return "question_choice";
}

const char* to_string(GroupKind kind) {
    switch (kind) {
    case GroupKind::multiple_choice: return "multiple_choice";
    case GroupKind::boolean: return "boolean";
    }
    return "multiple_choice";
}

const char* to_string(Stage stage) {
    switch (stage) {
    case Stage::stage_a: return "stage_a";
    case Stage::stage_b: return "stage_b";
    case Stage::eval_only: return "eval_only";
    }
    return "stage_a";
}

Origin origin_from_string(std::string_view text) {
    std::string t = lower_copy(text);
    if (t == "question_choice") return Origin::question_choice;
    if (t == "boolean") return Origin::boolean;
    if (t == "kb_original") return Origin::kb_original;
    if (t == "kb_perturbed") return Origin::kb_perturbed;
    if (t == "lm_falsehood") return Origin::lm_falsehood;
    throw InvalidArgument("unknown origin: " + std::string(text));
}

GroupKind kind_from_string(std::string_view text) {
    std::string t = lower_copy(text);
    if (t == "multiple_choice") return GroupKind::multiple_choice;
    if (t == "boolean") return GroupKind::boolean;
    throw InvalidArgument("unknown group kind: " + std::string(text));
}

Stage stage_from_string(std::string_view text) {
    std::string t = lower_copy(text);
    if (t == "stage_a") return Stage::stage_a;
    if (t == "stage_b") return Stage::stage_b;
    if (t == "eval_only") return Stage::eval_only;
    throw InvalidArgument("unknown stage: " + std::string(text));
}

} // namespace verity

#pragma once

#include "verity/rng.hpp"
#include "verity/statement.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace verity {

enum class QuestionForm {
    interrogative, // full question sentence ending in '?'
    cloze,         // blank marked by a run of underscores
    continuation,  // sentence prefix to be completed by the choice
    choices_only,  // choices already are full statements
};

QuestionForm question_form_from_string(std::string_view text);
const char* to_string(QuestionForm form);

struct MultipleChoiceProblem {
    std::string id;
    std::string question;
    std::vector<std::string> choices;
    std::size_t answer_index = 0;
    QuestionForm form = QuestionForm::interrogative;
};

struct BooleanProblem {
    std::string id;
    std::string question;
    bool answer = false;
};

struct KBEntry {
    std::string id;
    std::string subject;
    std::string text; // starts with subject (case-insensitive)
};

struct KnowledgeTriple {
    std::string id;
    std::string head;
    std::string relation;
    std::string tail;
    int valid = 0; // > 0 means acceptable
};

// Combines a question and one choice into a declarative sentence according to
// the question form. For boolean questions call with an empty choice and
// QuestionForm::interrogative; the auxiliary is moved back behind the subject
// instead. Raises ConversionFailure when no rule applies or the result would
// be empty.
std::string apply_conversion_rule(const std::string& question, const std::string& choice,
                                  QuestionForm form);

// One group per problem: every choice becomes a statement, the answer choice
// is the correct one.
StatementGroup convert_multiple_choice(const MultipleChoiceProblem& problem);

// A singleton boolean group.
StatementGroup convert_boolean(const BooleanProblem& problem);

// Original entry plus k subject-swapped copies. Replacement subjects are drawn
// without replacement from pool entries that differ (case-insensitively) from
// the entry's subject; fewer than k candidates raises InsufficientPool.
StatementGroup perturb_kb_entry(const KBEntry& entry, const std::vector<std::string>& pool,
                                std::size_t k, Rng& rng);

// Renders a (head, relation, tail) triple through a per-relation template.
// PersonX/PersonY/PersonZ placeholders are replaced by distinct names sampled
// from name_pool. Unknown relation raises UnknownRelation.
Statement render_skd_triple(const KnowledgeTriple& triple,
                            const std::vector<std::string>& name_pool, Rng& rng);

// Relations render_skd_triple understands.
const std::vector<std::string>& skd_relations();

// Default name pool for placeholder substitution.
const std::vector<std::string>& default_name_pool();

// Source of (answer text, generation probability) pairs for a question.
class AnswerSampler {
public:
    virtual ~AnswerSampler() = default;
    virtual std::vector<std::pair<std::string, double>> sample(const std::string& question,
                                                               std::size_t n) const = 0;
};

// Sampler backed by a JSON file mapping question text to [[answer, p], ...].
class FileAnswerSampler : public AnswerSampler {
public:
    explicit FileAnswerSampler(const std::filesystem::path& path);
    std::vector<std::pair<std::string, double>> sample(const std::string& question,
                                                       std::size_t n) const override;

private:
    std::map<std::string, std::vector<std::pair<std::string, double>>> table_;
};

struct FalsehoodOptions {
    std::size_t n = 50;   // answers to request from the sampler
    std::size_t k = 3;    // falsehoods to keep
    double p_max = 0.15;  // keep only answers with probability strictly below
};

// Extra incorrect statements for a multiple-choice problem, built from
// sampled answers. Drops answers at or above p_max, answers equal
// (case-insensitively) to an existing choice, and duplicates among the
// samples; of the rest the k least probable are converted (ties broken by
// text). Returns fewer than k when not enough answers survive.
std::vector<Statement> augment_falsehoods(const MultipleChoiceProblem& problem,
                                          const AnswerSampler& sampler,
                                          const FalsehoodOptions& options);

} // namespace verity

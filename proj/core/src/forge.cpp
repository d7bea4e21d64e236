#include "verity/forge.hpp"

#include "verity/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace verity {

namespace {

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool ci_equal(std::string_view a, std::string_view b) {
    return lower_copy(a) == lower_copy(b);
}

std::string capitalized(std::string text) {
    if (!text.empty()) {
        unsigned char c = static_cast<unsigned char>(text[0]);
        if (std::islower(c)) text[0] = static_cast<char>(std::toupper(c));
    }
    return text;
}

std::vector<std::string> question_words(const std::string& question) {
    // Trailing question marks and whitespace go away; inner punctuation stays
    // attached to its word.
    std::string_view s = trim(question);
    while (!s.empty() && (s.back() == '?' || std::isspace(static_cast<unsigned char>(s.back())))) {
        s.remove_suffix(1);
    }
    std::vector<std::string> words;
    std::istringstream stream{std::string(s)};
    std::string word;
    while (stream >> word) words.push_back(word);
    return words;
}

std::string join_words(const std::vector<std::string>& words, std::size_t begin,
                       std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end && i < words.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += words[i];
    }
    return out;
}

const std::set<std::string>& modal_words() {
    static const std::set<std::string> words{"would", "could", "should", "will", "shall",
                                            "can",   "may",   "might",  "must"};
    return words;
}

const std::set<std::string>& do_words() {
    static const std::set<std::string> words{"do", "does", "did"};
    return words;
}

const std::set<std::string>& be_words() {
    static const std::set<std::string> words{"is", "are", "was", "were"};
    return words;
}

const std::set<std::string>& have_words() {
    static const std::set<std::string> words{"has", "have", "had"};
    return words;
}

const std::set<std::string>& determiners() {
    static const std::set<std::string> words{
        "a",   "an",  "the",  "this", "that",  "these", "those", "my",      "your", "his",
        "her", "its", "our",  "their", "some", "any",   "every", "each",    "no",   "another"};
    return words;
}

const std::set<std::string>& wh_words() {
    static const std::set<std::string> words{"what", "who", "which", "where", "when", "why", "how"};
    return words;
}

bool is_determiner(const std::string& word) {
    return determiners().count(lower_copy(word)) > 0;
}

// Prepositions and comparative linkers that open the predicate's complement;
// they never end a subject noun phrase.
const std::set<std::string>& linker_words() {
    static const std::set<std::string> words{
        "in",   "on",     "at",      "to",      "from",   "with",   "into",  "onto",
        "over", "under",  "through", "of",      "for",    "about",  "near",  "behind",
        "across", "around", "inside", "outside", "beside", "upon",  "toward",
        "towards", "than", "as"};
    return words;
}

enum class SubjectKind {
    after_verb_aux, // do/does/did, modals, have: a main verb follows the subject
    after_be_aux,   // is/are/was/were: the predicate follows directly
};

// First index in `words` that is no longer part of the subject noun phrase.
// Heuristic: after a verb-taking auxiliary, a determiner-led subject runs
// until just before the main verb, located as the word in front of the next
// determiner once any linker run (prepositions, "than"/"as") is stepped over.
// Without a second determiner, and for be-auxiliaries, the phrase is the
// determiner plus one word. Either way the phrase extends over following
// capitalized words so proper names stay together. A bare first word is its
// own subject, with the same capitalized extension.
std::size_t subject_end(const std::vector<std::string>& words, SubjectKind kind) {
    if (words.empty()) throw ConversionFailure("cannot locate a subject in empty question body");
    std::size_t end = 1;
    if (is_determiner(words[0])) {
        if (kind == SubjectKind::after_verb_aux) {
            for (std::size_t j = 2; j < words.size(); ++j) {
                if (is_determiner(words[j])) {
                    if (j == 2) return 2;
                    while (j > 3 && linker_words().count(lower_copy(words[j - 1]))) --j;
                    return j - 1;
                }
            }
        }
        end = std::min<std::size_t>(2, words.size());
    }
    while (end + 1 < words.size() &&
           std::isupper(static_cast<unsigned char>(words[end][0]))) {
        ++end;
    }
    return end;
}

// Third-person present for do/does questions, simple past for did.
std::string inflect(const std::string& verb, const std::string& aux_lower) {
    if (aux_lower == "do") return verb;
    std::string v = verb;
    auto ends_with = [&](std::string_view suffix) {
        return v.size() >= suffix.size() && v.compare(v.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    bool y_after_consonant = v.size() >= 2 && v.back() == 'y' &&
                             std::string("aeiou").find(v[v.size() - 2]) == std::string::npos;
    if (aux_lower == "does") {
        if (y_after_consonant) return v.substr(0, v.size() - 1) + "ies";
        if (ends_with("s") || ends_with("x") || ends_with("z") || ends_with("ch") ||
            ends_with("sh") || ends_with("o")) {
            return v + "es";
        }
        return v + "s";
    }
    // did
    if (y_after_consonant) return v.substr(0, v.size() - 1) + "ied";
    if (ends_with("e")) return v + "d";
    return v + "ed";
}

// "a"/"an" in front of a bare lowercase noun; anything multi-word, already
// capitalized, or already starting with a determiner is kept as-is.
std::string with_article(const std::string& choice) {
    std::string text(trim(choice));
    if (text.empty()) return text;
    if (text.find(' ') != std::string::npos) return text;
    unsigned char first = static_cast<unsigned char>(text[0]);
    if (!std::islower(first)) return text;
    if (is_determiner(text)) return text;
    static const std::string vowels = "aeiou";
    bool vowel = vowels.find(static_cast<char>(first)) != std::string::npos;
    return (vowel ? "an " : "a ") + text;
}

std::string ensure_period(std::string text) {
    if (text.empty()) return text;
    char last = text.back();
    if (last != '.' && last != '!' && last != '?') text += '.';
    return text;
}

std::string convert_boolean_question(const std::string& question) {
    std::vector<std::string> words = question_words(question);
    if (words.empty()) throw ConversionFailure("empty question");
    std::string aux = lower_copy(words[0]);
    bool is_aux = modal_words().count(aux) || do_words().count(aux) || be_words().count(aux) ||
                  have_words().count(aux);
    if (!is_aux) {
        return ensure_period(capitalized(join_words(words, 0, words.size())));
    }
    std::vector<std::string> rest(words.begin() + 1, words.end());
    SubjectKind kind =
        be_words().count(aux) ? SubjectKind::after_be_aux : SubjectKind::after_verb_aux;
    std::size_t split = subject_end(rest, kind);
    if (split >= rest.size()) {
        throw ConversionFailure("no predicate after subject in: " + question);
    }
    std::string subject = capitalized(join_words(rest, 0, split));
    if (do_words().count(aux)) {
        std::string verb = inflect(rest[split], aux);
        std::string tail = join_words(rest, split + 1, rest.size());
        std::string out = subject + " " + verb;
        if (!tail.empty()) out += " " + tail;
        return ensure_period(out);
    }
    return ensure_period(subject + " " + aux + " " + join_words(rest, split, rest.size()));
}

std::string convert_wh_question(const std::string& question, const std::string& choice) {
    std::vector<std::string> words = question_words(question);
    if (words.empty()) throw ConversionFailure("empty question");
    std::string wh = lower_copy(words[0]);
    if (!wh_words().count(wh)) {
        // Last resort: statement-shaped question plus the choice.
        std::string body = join_words(words, 0, words.size());
        return ensure_period(body.empty() ? capitalized(choice) : body + " " + choice);
    }
    std::string second = words.size() > 1 ? lower_copy(words[1]) : "";
    if (be_words().count(second)) {
        return ensure_period(capitalized(with_article(choice)) + " " + second + " " +
                             join_words(words, 2, words.size()));
    }
    bool aux_do = do_words().count(second) > 0;
    if (modal_words().count(second) || aux_do) {
        std::vector<std::string> rest(words.begin() + 2, words.end());
        std::size_t split = subject_end(rest, SubjectKind::after_verb_aux);
        if (split >= rest.size()) {
            throw ConversionFailure("no predicate after subject in: " + question);
        }
        std::string subject = capitalized(join_words(rest, 0, split));
        std::string verb = aux_do ? inflect(rest[split], second) : rest[split];
        std::string tail = join_words(rest, split + 1, rest.size());
        std::string out = subject;
        if (!aux_do) out += " " + second;
        out += " " + verb;
        bool object_position = wh == "what" || wh == "who" || wh == "which";
        if (object_position) {
            out += " " + with_article(choice);
            if (!tail.empty()) out += " " + tail;
        } else {
            if (!tail.empty()) out += " " + tail;
            out += " " + std::string(trim(choice));
        }
        return ensure_period(out);
    }
    // Wh word is the subject itself.
    std::size_t body_begin = (wh == "which" && words.size() > 2) ? 2 : 1;
    return ensure_period(capitalized(with_article(choice)) + " " +
                         join_words(words, body_begin, words.size()));
}

std::string replace_first_blank(const std::string& question, const std::string& choice) {
    std::size_t begin = question.find('_');
    if (begin == std::string::npos) {
        throw ConversionFailure("cloze question has no blank: " + question);
    }
    std::size_t end = begin;
    while (end < question.size() && question[end] == '_') ++end;
    return question.substr(0, begin) + choice + question.substr(end);
}

} // namespace

QuestionForm question_form_from_string(std::string_view text) {
    std::string t = lower_copy(text);
    if (t == "interrogative") return QuestionForm::interrogative;
    if (t == "cloze") return QuestionForm::cloze;
    if (t == "continuation") return QuestionForm::continuation;
    if (t == "choices_only") return QuestionForm::choices_only;
    throw InvalidArgument("unknown question form: " + std::string(text));
}

const char* to_string(QuestionForm form) {
    switch (form) {
    case QuestionForm::interrogative: return "interrogative";
    case QuestionForm::cloze: return "cloze";
    case QuestionForm::continuation: return "continuation";
    case QuestionForm::choices_only: return "choices_only";
    }
    return "interrogative";
}

std::string apply_conversion_rule(const std::string& question, const std::string& choice,
                                  QuestionForm form) {
    std::string result;
    switch (form) {
    case QuestionForm::interrogative:
        result = trim(choice).empty() ? convert_boolean_question(question)
                                      : convert_wh_question(question, choice);
        break;
    case QuestionForm::cloze:
        result = replace_first_blank(question, choice);
        break;
    case QuestionForm::continuation: {
        std::string q(trim(question));
        std::string c(trim(choice));
        result = q.empty() ? c : (c.empty() ? q : q + " " + c);
        break;
    }
    case QuestionForm::choices_only:
        result = choice;
        break;
    }
    if (trim(result).empty()) {
        throw ConversionFailure("conversion produced an empty statement");
    }
    return result;
}

StatementGroup convert_multiple_choice(const MultipleChoiceProblem& problem) {
    if (problem.choices.size() < 2) {
        throw ConversionFailure("problem '" + problem.id + "' needs >= 2 choices");
    }
    if (problem.answer_index >= problem.choices.size()) {
        throw ConversionFailure("problem '" + problem.id + "' answer index out of range");
    }
    StatementGroup group;
    group.group_id = problem.id;
    group.kind = GroupKind::multiple_choice;
    for (std::size_t i = 0; i < problem.choices.size(); ++i) {
        Statement st;
        st.text = apply_conversion_rule(problem.question, problem.choices[i], problem.form);
        st.label = i == problem.answer_index;
        st.origin = Origin::question_choice;
        st.source_id = problem.id + "#" + std::to_string(i);
        group.statements.push_back(std::move(st));
    }
    ValidationResult check = validate_group(group);
    if (!check.ok()) {
        throw ConversionFailure("problem '" + problem.id +
                                "' converts to an invalid group: " +
                                check.violations.front().invariant);
    }
    return group;
}

StatementGroup convert_boolean(const BooleanProblem& problem) {
    StatementGroup group;
    group.group_id = problem.id;
    group.kind = GroupKind::boolean;
    Statement st;
    st.text = apply_conversion_rule(problem.question, "", QuestionForm::interrogative);
    st.label = problem.answer;
    st.origin = Origin::boolean;
    st.source_id = problem.id + "#0";
    group.statements.push_back(std::move(st));
    require_valid(group);
    return group;
}

StatementGroup perturb_kb_entry(const KBEntry& entry, const std::vector<std::string>& pool,
                                std::size_t k, Rng& rng) {
    if (k < 1) throw InvalidArgument("perturb_kb_entry requires k >= 1");
    std::string text(trim(entry.text));
    std::string subject(trim(entry.subject));
    if (subject.empty() || text.size() < subject.size() ||
        !ci_equal(std::string_view(text).substr(0, subject.size()), subject)) {
        throw ConversionFailure("kb entry '" + entry.id +
                                "' text does not start with its subject");
    }

    std::vector<std::string> candidates;
    std::set<std::string> seen;
    for (const std::string& s : pool) {
        std::string t(trim(s));
        std::string key = lower_copy(t);
        if (t.empty() || key == lower_copy(subject)) continue;
        if (seen.insert(key).second) candidates.push_back(t);
    }
    if (candidates.size() < k) {
        throw InsufficientPool("kb entry '" + entry.id + "': need " + std::to_string(k) +
                               " replacement subjects, pool has " +
                               std::to_string(candidates.size()));
    }

    StatementGroup group;
    group.group_id = entry.id;
    group.kind = GroupKind::multiple_choice;
    Statement original;
    original.text = text;
    original.label = true;
    original.origin = Origin::kb_original;
    original.source_id = entry.id + "#0";
    group.statements.push_back(std::move(original));

    std::string suffix = text.substr(subject.size());
    std::vector<std::size_t> picks = rng.sample_indices(candidates.size(), k);
    for (std::size_t i = 0; i < picks.size(); ++i) {
        Statement st;
        st.text = candidates[picks[i]] + suffix;
        st.label = false;
        st.origin = Origin::kb_perturbed;
        st.source_id = entry.id + "#" + std::to_string(i + 1);
        group.statements.push_back(std::move(st));
    }
    require_valid(group);
    return group;
}

namespace {

struct SkdTemplate {
    // {h} = head, {t} = tail, {x} = the name bound to PersonX.
    const char* pattern;
};

const std::map<std::string, SkdTemplate>& skd_templates() {
    static const std::map<std::string, SkdTemplate> table{
        {"xIntent", {"{h}. Because {x} wanted {t}."}},
        {"xNeed", {"{h}. But before, {x} needed {t}."}},
        {"xAttr", {"{h}. {x} is seen as {t}."}},
        {"xEffect", {"{h}. As a result, {x} will {t}."}},
        {"xReact", {"{h}. As a result, {x} feels {t}."}},
        {"xWant", {"{h}. After that, {x} wants {t}."}},
        {"HinderedBy", {"{h}. This is hindered by {t}."}},
    };
    return table;
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

} // namespace

const std::vector<std::string>& skd_relations() {
    static const std::vector<std::string> relations = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : skd_templates()) out.push_back(name);
        return out;
    }();
    return relations;
}

const std::vector<std::string>& default_name_pool() {
    static const std::vector<std::string> names{
        "Arnold", "Bessie", "Carmen", "Dmitri", "Elena",  "Felix",  "Greta",
        "Hector", "Ingrid", "Jonas",  "Keiko",  "Lamar",  "Marta",  "Nestor",
        "Opal",   "Pablo",  "Quinn",  "Rosa",   "Stefan", "Tamsin",
    };
    return names;
}

Statement render_skd_triple(const KnowledgeTriple& triple,
                            const std::vector<std::string>& name_pool, Rng& rng) {
    auto it = skd_templates().find(triple.relation);
    if (it == skd_templates().end()) {
        throw UnknownRelation("no template for relation '" + triple.relation + "'");
    }
    std::string head(trim(triple.head));
    std::string tail(trim(triple.tail));
    while (!head.empty() && head.back() == '.') head.pop_back();

    std::string pattern = it->second.pattern;
    bool uses_x = pattern.find("{x}") != std::string::npos ||
                  head.find("PersonX") != std::string::npos ||
                  tail.find("PersonX") != std::string::npos;
    bool uses_y = head.find("PersonY") != std::string::npos ||
                  tail.find("PersonY") != std::string::npos;
    bool uses_z = head.find("PersonZ") != std::string::npos ||
                  tail.find("PersonZ") != std::string::npos;

    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (const std::string& name : name_pool) {
        std::string t(trim(name));
        if (!t.empty() && seen.insert(t).second) pool.push_back(t);
    }
    std::size_t needed = static_cast<std::size_t>(uses_x) + uses_y + uses_z;
    if (pool.size() < needed) {
        throw InsufficientPool("need " + std::to_string(needed) + " distinct names, pool has " +
                               std::to_string(pool.size()));
    }
    std::vector<std::size_t> picks = rng.sample_indices(pool.size(), needed);
    std::size_t next = 0;
    std::string name_x = uses_x ? pool[picks[next++]] : "";
    std::string name_y = uses_y ? pool[picks[next++]] : "";
    std::string name_z = uses_z ? pool[picks[next++]] : "";

    auto substitute = [&](std::string text) {
        if (uses_x) replace_all(text, "PersonX", name_x);
        if (uses_y) replace_all(text, "PersonY", name_y);
        if (uses_z) replace_all(text, "PersonZ", name_z);
        return text;
    };

    std::string out = pattern;
    replace_all(out, "{h}", substitute(head));
    replace_all(out, "{t}", substitute(tail));
    if (uses_x) replace_all(out, "{x}", name_x);

    Statement st;
    st.text = std::move(out);
    st.label = triple.valid > 0;
    st.origin = Origin::boolean;
    st.source_id = triple.id;
    if (trim(st.text).empty()) throw ConversionFailure("triple renders to an empty statement");
    return st;
}

FileAnswerSampler::FileAnswerSampler(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open sampler file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoFailure("sampler file " + path.string() + ": " + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::vector<std::pair<std::string, double>> pairs;
        for (const auto& entry : it.value()) {
            pairs.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
        }
        table_[it.key()] = std::move(pairs);
    }
}

std::vector<std::pair<std::string, double>> FileAnswerSampler::sample(const std::string& question,
                                                                      std::size_t n) const {
    auto it = table_.find(question);
    if (it == table_.end()) return {};
    std::vector<std::pair<std::string, double>> out = it->second;
    if (out.size() > n) out.resize(n);
    return out;
}

std::vector<Statement> augment_falsehoods(const MultipleChoiceProblem& problem,
                                          const AnswerSampler& sampler,
                                          const FalsehoodOptions& options) {
    if (options.n < options.k) {
        throw InvalidArgument("augment_falsehoods requires n >= k");
    }
    auto sampled = sampler.sample(problem.question, options.n);

    std::set<std::string> taken;
    for (const std::string& choice : problem.choices) {
        taken.insert(lower_copy(std::string(trim(choice))));
    }
    std::set<std::string> taken_texts;
    for (const std::string& choice : problem.choices) {
        taken_texts.insert(
            lower_copy(apply_conversion_rule(problem.question, choice, problem.form)));
    }

    std::vector<std::pair<std::string, double>> kept;
    for (auto& [text, p] : sampled) {
        std::string t(trim(text));
        if (t.empty()) continue;
        if (!(p < options.p_max)) continue;
        if (taken.count(lower_copy(t))) continue;
        kept.emplace_back(std::move(t), p);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });

    std::vector<Statement> out;
    std::set<std::string> used;
    for (const auto& [text, p] : kept) {
        if (out.size() == options.k) break;
        if (!used.insert(lower_copy(text)).second) continue;
        std::string converted = apply_conversion_rule(problem.question, text, problem.form);
        if (!taken_texts.insert(lower_copy(converted)).second) continue;
        Statement st;
        st.text = std::move(converted);
        st.label = false;
        st.origin = Origin::lm_falsehood;
        st.source_id = problem.id + "#f" + std::to_string(out.size());
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace verity

#include "verity/synthetic.hpp"

#include "verity/errors.hpp"
#include "verity/rng.hpp"

#include <array>
#include <cctype>
#include <vector>

namespace verity {
namespace {

constexpr std::array<const char*, 8> kTrueWords = {
    "genuine", "verified", "sound", "solid", "proper", "accurate", "faithful", "exact",
};
constexpr std::array<const char*, 8> kFalseWords = {
    "bogus", "phony", "warped", "askew", "garbled", "spurious", "hollow", "counterfeit",
};
constexpr std::array<const char*, 10> kSubjects = {
    "the kettle", "the lantern", "the sparrow", "the ledger", "the compass",
    "the parcel", "the willow", "the anvil",   "the beacon", "the saddle",
};
constexpr std::array<const char*, 6> kVerbs = {
    "remains", "appears", "proves", "stands", "sounds", "looks",
};
constexpr std::array<const char*, 6> kTails = {
    "today", "in practice", "on inspection", "by all accounts", "after review",
    "under pressure",
};

std::string compose(std::size_t subject, std::size_t verb, const char* keyword,
                    std::size_t tail) {
    std::string text = kSubjects[subject];
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    text += ' ';
    text += kVerbs[verb];
    text += ' ';
    text += keyword;
    text += ' ';
    text += kTails[tail];
    text += '.';
    return text;
}

Statement make_statement(const std::string& group_id, std::size_t index, std::string text,
                         bool label, Origin origin) {
    Statement s;
    s.text = std::move(text);
    s.label = label;
    s.origin = origin;
    s.source_id = group_id + "#" + std::to_string(index);
    return s;
}

StatementGroup make_mc_group(const std::string& group_id, std::size_t n_choices,
                             Origin true_origin, Origin false_origin, Rng& rng) {
    std::size_t subject = rng.below(kSubjects.size());
    std::size_t verb = rng.below(kVerbs.size());
    std::size_t tail = rng.below(kTails.size());
    std::size_t correct = rng.below(n_choices);
    const char* true_word = kTrueWords[rng.below(kTrueWords.size())];
    std::vector<std::size_t> false_order = rng.sample_indices(kFalseWords.size(), n_choices - 1);

    StatementGroup group;
    group.group_id = group_id;
    group.kind = GroupKind::multiple_choice;
    std::size_t next_false = 0;
    for (std::size_t c = 0; c < n_choices; ++c) {
        bool is_correct = c == correct;
        const char* keyword =
            is_correct ? true_word : kFalseWords[false_order[next_false++]];
        group.statements.push_back(make_statement(
            group_id, c, compose(subject, verb, keyword, tail), is_correct,
            is_correct ? true_origin : false_origin));
    }
    return group;
}

StatementGroup make_boolean_group(const std::string& group_id, Rng& rng) {
    std::size_t subject = rng.below(kSubjects.size());
    std::size_t verb = rng.below(kVerbs.size());
    std::size_t tail = rng.below(kTails.size());
    bool label = rng.below(2) == 1;
    const char* keyword = label ? kTrueWords[rng.below(kTrueWords.size())]
                                : kFalseWords[rng.below(kFalseWords.size())];
    StatementGroup group;
    group.group_id = group_id;
    group.kind = GroupKind::boolean;
    group.statements.push_back(make_statement(group_id, 0,
                                              compose(subject, verb, keyword, tail), label,
                                              Origin::boolean));
    return group;
}

}  // namespace

const char* to_string(SyntheticStyle style) {
    switch (style) {
    case SyntheticStyle::kb:
        return "kb";
    case SyntheticStyle::qa:
        return "qa";
    }
    throw InvalidArgument("unknown synthetic style");
}

SyntheticStyle synthetic_style_from_string(std::string_view text) {
    if (text == "kb") {
        return SyntheticStyle::kb;
    }
    if (text == "qa") {
        return SyntheticStyle::qa;
    }
    throw InvalidArgument("unknown synthetic style '" + std::string(text) + "'");
}

DatasetPartition generate_synthetic_corpus(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.n_groups == 0) {
        throw InvalidArgument("generate_synthetic_corpus: n_groups must be positive");
    }
    if (spec.min_choices < 2 || spec.max_choices > kFalseWords.size() ||
        spec.min_choices > spec.max_choices) {
        throw InvalidArgument(
            "generate_synthetic_corpus: choice range must satisfy 2 <= min <= max <= 8");
    }
    if (!(spec.boolean_fraction >= 0.0 && spec.boolean_fraction <= 1.0)) {
        throw InvalidArgument("generate_synthetic_corpus: boolean_fraction outside [0, 1]");
    }

    DatasetPartition partition;
    partition.name = spec.name;
    partition.stage = spec.stage;
    partition.groups.reserve(spec.n_groups);
    for (std::size_t i = 0; i < spec.n_groups; ++i) {
        Rng rng(derive_seed(seed, "synth_group", i));
        std::string group_id = spec.name + "-" + to_string(spec.style) + "-g" +
                               std::to_string(i);
        StatementGroup group;
        if (spec.style == SyntheticStyle::kb) {
            group = make_mc_group(group_id, 4, Origin::kb_original, Origin::kb_perturbed, rng);
        } else if (rng.uniform() < spec.boolean_fraction) {
            group = make_boolean_group(group_id, rng);
        } else {
            std::size_t span = spec.max_choices - spec.min_choices + 1;
            std::size_t n_choices = spec.min_choices + rng.below(span);
            group = make_mc_group(group_id, n_choices, Origin::question_choice,
                                  Origin::question_choice, rng);
        }
        require_valid(group);
        partition.groups.push_back(std::move(group));
    }
    return partition;
}

}  // namespace verity

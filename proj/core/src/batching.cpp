#include "verity/batching.hpp"

#include "verity/errors.hpp"
#include "verity/tokenizer.hpp"

#include <algorithm>

namespace verity {

std::size_t Batch::group_of(std::size_t flat) const {
    auto it = std::upper_bound(offsets.begin(), offsets.end(), flat);
    return static_cast<std::size_t>(it - offsets.begin()) - 1;
}

const Statement& Batch::statement(std::size_t flat) const {
    std::size_t g = group_of(flat);
    return groups[g].statements[flat - offsets[g]];
}

std::span<const int> Batch::group_labels(std::size_t group) const {
    return std::span<const int>(labels).subspan(offsets[group],
                                                offsets[group + 1] - offsets[group]);
}

StatementGroup cap_group(const StatementGroup& group, std::size_t cap, Rng& rng) {
    if (cap < 1) throw InvalidArgument("cap_group requires cap >= 1");
    if (group.statements.size() <= cap) return group;

    std::vector<std::size_t> correct;
    std::vector<std::size_t> incorrect;
    for (std::size_t i = 0; i < group.statements.size(); ++i) {
        (group.statements[i].label ? correct : incorrect).push_back(i);
    }
    if (correct.size() > cap) {
        throw CapTooSmall("group '" + group.group_id + "': cap " + std::to_string(cap) +
                          " cannot keep " + std::to_string(correct.size()) +
                          " correct statements");
    }
    if (group.kind == GroupKind::multiple_choice && cap < 2) {
        throw CapTooSmall("group '" + group.group_id +
                          "': multiple_choice group needs a cap of >= 2");
    }

    std::size_t slots = cap - correct.size();
    std::vector<std::size_t> picks = rng.sample_indices(incorrect.size(), slots);
    std::vector<std::size_t> keep = correct;
    for (std::size_t p : picks) keep.push_back(incorrect[p]);
    std::sort(keep.begin(), keep.end());

    StatementGroup out;
    out.group_id = group.group_id;
    out.kind = group.kind;
    for (std::size_t i : keep) out.statements.push_back(group.statements[i]);
    require_valid(out);
    return out;
}

Statement truncate_statement(const Statement& statement, const TokenSplitter& splitter,
                             std::size_t max_tokens) {
    if (max_tokens < 2) {
        throw InvalidArgument("truncate_statement requires max_tokens >= 2");
    }
    std::vector<std::string> tokens = splitter(statement.text);
    std::size_t budget = max_tokens - 1; // EOS occupies the last slot
    if (tokens.size() <= budget) return statement;
    tokens.resize(budget);
    Statement out = statement;
    std::string text;
    for (const std::string& tok : tokens) {
        if (!text.empty()) text += ' ';
        text += tok;
    }
    out.text = std::move(text);
    return out;
}

Statement truncate_statement(const Statement& statement, std::size_t max_tokens) {
    return truncate_statement(
        statement, [](std::string_view text) { return split_tokens(text); }, max_tokens);
}

std::vector<Batch> build_batches(std::span<const StatementGroup> groups,
                                 const BatchConfig& config) {
    if (config.groups_per_batch < 1) {
        throw InvalidArgument("build_batches requires groups_per_batch >= 1");
    }
    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(derive_seed(config.seed, "batch_shuffle"));
    shuffle_rng.shuffle(order);

    // Cap draws are derived per group from its dataset position, so a frozen
    // cap_seed keeps each group's kept subset stable across epochs even
    // though the shuffle changes.
    std::uint64_t cap_base = config.cap_seed.value_or(config.seed);
    std::vector<Batch> batches;
    for (std::size_t start = 0; start < order.size(); start += config.groups_per_batch) {
        std::size_t end = std::min(order.size(), start + config.groups_per_batch);
        Batch batch;
        batch.offsets.push_back(0);
        for (std::size_t i = start; i < end; ++i) {
            Rng cap_rng(derive_seed(cap_base, "group_cap", order[i]));
            StatementGroup capped = cap_group(groups[order[i]], config.cap_per_group, cap_rng);
            for (Statement& st : capped.statements) {
                st = truncate_statement(st, config.max_tokens);
                batch.labels.push_back(st.label ? 1 : 0);
            }
            batch.groups.push_back(std::move(capped));
            batch.offsets.push_back(batch.labels.size());
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

} // namespace verity

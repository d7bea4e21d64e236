#pragma once

#include "verity/rng.hpp"
#include "verity/statement.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verity {

struct BatchConfig {
    std::size_t groups_per_batch = 64;
    std::size_t cap_per_group = 4;  // statements kept per group at most
    std::size_t max_tokens = 128;   // per-statement token budget including EOS
    std::uint64_t seed = 0;
    // When set, capping draws from this seed instead of `seed`; the trainer
    // uses it to keep caps frozen across epochs while still reshuffling.
    std::optional<std::uint64_t> cap_seed;
};

// A group-preserving batch. Statements are stored flattened in group-major
// order; group j owns flat positions [offsets[j], offsets[j+1]).
struct Batch {
    std::vector<StatementGroup> groups;
    std::vector<std::size_t> offsets; // size groups.size() + 1
    std::vector<int> labels;          // flattened 0/1 labels

    std::size_t size() const { return labels.size(); }
    std::size_t group_count() const { return groups.size(); }
    std::size_t group_of(std::size_t flat) const;
    const Statement& statement(std::size_t flat) const;
    std::span<const int> group_labels(std::size_t group) const;
};

using TokenSplitter = std::function<std::vector<std::string>(std::string_view)>;

// Keeps every correct statement and a uniform sample of the incorrect ones so
// the group fits in `cap` slots; relative order is preserved. Groups at or
// under the cap pass through unchanged. Raises CapTooSmall when the cap
// cannot hold all correct statements, or cannot keep a multiple-choice group
// valid (>= 2 statements).
StatementGroup cap_group(const StatementGroup& group, std::size_t cap, Rng& rng);

// Rewrites the statement so it splits into at most max_tokens - 1 tokens,
// leaving room for EOS. Tokens are rejoined with single spaces.
Statement truncate_statement(const Statement& statement, std::size_t max_tokens);
Statement truncate_statement(const Statement& statement, const TokenSplitter& splitter,
                             std::size_t max_tokens);

// Shuffles groups, caps each, and packs them `groups_per_batch` at a time; a
// final partial batch is kept. Every input group lands in exactly one batch.
std::vector<Batch> build_batches(std::span<const StatementGroup> groups,
                                 const BatchConfig& config);

} // namespace verity

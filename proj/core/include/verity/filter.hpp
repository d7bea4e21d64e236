#pragma once

#include "verity/model.hpp"
#include "verity/statement.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace verity {

struct FilterResult {
    std::vector<std::string> kept;
    std::vector<std::string> dropped;
    // One entry per input text, input order.
    std::vector<ScoredStatement> scored;
};

// Scores each text as a standalone statement, same order as the input.
std::vector<ScoredStatement> score_statements(std::span<const std::string> texts,
                                              const VerifierModel& model);

// Partitions the input: kept holds texts whose score is strictly above the
// threshold, dropped the rest, both in input order. Empty input gives empty
// outputs.
FilterResult filter_knowledge(std::span<const std::string> texts, const VerifierModel& model,
                              double threshold = 0.5);

// Reads candidate statements. A .jsonl file is statement-group JSONL,
// flattened in file order; anything else is plain text, one statement per
// line, blank lines skipped.
std::vector<std::string> read_statement_lines(const std::filesystem::path& path);

// One statement per line, LF endings.
void write_statement_lines(const std::filesystem::path& path,
                           std::span<const std::string> texts);

}  // namespace verity

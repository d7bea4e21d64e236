#pragma once

#include "verity/statement.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace verity {

// One line of a score file: a statement's identity plus the model's view of it.
struct ScoreRecord {
    std::string source_id;
    double logit = 0.0;
    double score = 0.0;
    bool label = false;

    bool operator==(const ScoreRecord&) const = default;
};

// Statement-group JSONL. One object per line, UTF-8, LF line endings, keys
// {group_id, kind, statements:[{text, label, origin, source_id}]}. Reading
// validates every group and reports the offending line on failure.
std::string group_to_json_line(const StatementGroup& group);
StatementGroup group_from_json_line(const std::string& line);

std::vector<StatementGroup> read_group_jsonl(const std::filesystem::path& path);
std::vector<StatementGroup> read_group_jsonl(std::istream& in, const std::string& name);
void write_group_jsonl(const std::filesystem::path& path, std::span<const StatementGroup> groups);
void write_group_jsonl(std::ostream& out, std::span<const StatementGroup> groups);

// Score JSONL: {source_id, logit, score, label} per line.
std::vector<ScoreRecord> read_score_jsonl(const std::filesystem::path& path);
void write_score_jsonl(const std::filesystem::path& path, std::span<const ScoreRecord> records);

} // namespace verity

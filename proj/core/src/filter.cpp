#include "verity/filter.hpp"

#include "verity/errors.hpp"
#include "verity/jsonl.hpp"

#include <cmath>
#include <fstream>

namespace verity {

std::vector<ScoredStatement> score_statements(std::span<const std::string> texts,
                                              const VerifierModel& model) {
    std::vector<ScoredStatement> scored;
    scored.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Statement statement;
        statement.text = texts[i];
        statement.source_id = "line-" + std::to_string(i);
        scored.push_back(model.score(statement));
    }
    return scored;
}

FilterResult filter_knowledge(std::span<const std::string> texts, const VerifierModel& model,
                              double threshold) {
    if (!std::isfinite(threshold)) {
        throw InvalidArgument("filter_knowledge: threshold must be finite");
    }
    FilterResult result;
    result.scored = score_statements(texts, model);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (result.scored[i].score > threshold) {
            result.kept.push_back(texts[i]);
        } else {
            result.dropped.push_back(texts[i]);
        }
    }
    return result;
}

std::vector<std::string> read_statement_lines(const std::filesystem::path& path) {
    std::vector<std::string> texts;
    if (path.extension() == ".jsonl") {
        for (const StatementGroup& group : read_group_jsonl(path)) {
            for (const Statement& statement : group.statements) {
                texts.push_back(statement.text);
            }
        }
        return texts;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open " + path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        texts.push_back(line);
    }
    return texts;
}

void write_statement_lines(const std::filesystem::path& path,
                           std::span<const std::string> texts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open " + path.string() + " for writing");
    }
    for (const std::string& text : texts) {
        out << text << '\n';
    }
    if (!out) {
        throw IoFailure("failed writing " + path.string());
    }
}

}  // namespace verity

#include "verity/jsonl.hpp"

#include "verity/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace verity {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json group_to_json(const StatementGroup& group) {
    ordered_json statements = ordered_json::array();
    for (const Statement& st : group.statements) {
        statements.push_back({
            {"text", st.text},
            {"label", st.label},
            {"origin", to_string(st.origin)},
            {"source_id", st.source_id},
        });
    }
    return ordered_json{
        {"group_id", group.group_id},
        {"kind", to_string(group.kind)},
        {"statements", std::move(statements)},
    };
}

StatementGroup group_from_json(const ordered_json& j) {
    StatementGroup group;
    group.group_id = j.at("group_id").get<std::string>();
    group.kind = kind_from_string(j.at("kind").get<std::string>());
    for (const auto& s : j.at("statements")) {
        Statement st;
        st.text = s.at("text").get<std::string>();
        st.label = s.at("label").get<bool>();
        st.origin = origin_from_string(s.at("origin").get<std::string>());
        st.source_id = s.at("source_id").get<std::string>();
        group.statements.push_back(std::move(st));
    }
    return group;
}

} // namespace

std::string group_to_json_line(const StatementGroup& group) {
    return group_to_json(group).dump();
}

StatementGroup group_from_json_line(const std::string& line) {
    ordered_json j = ordered_json::parse(line);
    return group_from_json(j);
}

std::vector<StatementGroup> read_group_jsonl(std::istream& in, const std::string& name) {
    std::vector<StatementGroup> groups;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        StatementGroup group;
        try {
            group = group_from_json_line(line);
        } catch (const VerityError&) {
            throw;
        } catch (const std::exception& e) {
            throw IoFailure(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ValidationResult check = validate_group(group);
        if (!check.ok()) {
            const Violation& v = check.violations.front();
            throw InvalidGroup(name + ":" + std::to_string(lineno) + ": " + v.invariant + ": " +
                               v.detail);
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<StatementGroup> read_group_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    return read_group_jsonl(in, path.string());
}

void write_group_jsonl(std::ostream& out, std::span<const StatementGroup> groups) {
    for (const StatementGroup& group : groups) {
        out << group_to_json_line(group) << '\n';
    }
}

void write_group_jsonl(const std::filesystem::path& path, std::span<const StatementGroup> groups) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    write_group_jsonl(out, groups);
    if (!out) throw IoFailure("failed writing " + path.string());
}

std::vector<ScoreRecord> read_score_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<ScoreRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        try {
            ordered_json j = ordered_json::parse(line);
            ScoreRecord rec;
            rec.source_id = j.at("source_id").get<std::string>();
            rec.logit = j.at("logit").get<double>();
            rec.score = j.at("score").get<double>();
            rec.label = j.at("label").get<bool>();
            records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            throw IoFailure(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

void write_score_jsonl(const std::filesystem::path& path, std::span<const ScoreRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    for (const ScoreRecord& rec : records) {
        ordered_json j{
            {"source_id", rec.source_id},
            {"logit", rec.logit},
            {"score", rec.score},
            {"label", rec.label},
        };
        out << j.dump() << '\n';
    }
    if (!out) throw IoFailure("failed writing " + path.string());
}

} // namespace verity

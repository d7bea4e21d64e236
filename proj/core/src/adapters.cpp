#include "verity/adapters.hpp"

#include "verity/errors.hpp"
#include "verity/rng.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace verity {

namespace {

using nlohmann::json;

struct RawLine {
    json value;
    std::size_t lineno = 0;
};

std::vector<RawLine> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<RawLine> lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        try {
            lines.push_back({json::parse(line), lineno});
        } catch (const std::exception& e) {
            throw IoFailure(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return lines;
}

std::string line_id(const json& j, const std::string& adapter, std::size_t lineno) {
    if (j.contains("id") && j.at("id").is_string() && !j.at("id").get<std::string>().empty()) {
        return j.at("id").get<std::string>();
    }
    return adapter + "-" + std::to_string(lineno);
}

QuestionForm detect_form(const json& j, const std::string& question) {
    if (j.contains("form")) {
        return question_form_from_string(j.at("form").get<std::string>());
    }
    if (question.find('_') != std::string::npos) return QuestionForm::cloze;
    std::string_view t = trim(question);
    if (!t.empty() && t.back() == '?') return QuestionForm::interrogative;
    return QuestionForm::continuation;
}

void require_single_input(const std::vector<std::filesystem::path>& inputs,
                          const std::string& adapter) {
    if (inputs.size() != 1) {
        throw InvalidArgument("adapter '" + adapter + "' takes exactly one input file");
    }
}

MultipleChoiceProblem mc_problem_from(const json& j, const std::string& adapter,
                                      std::size_t lineno) {
    MultipleChoiceProblem p;
    p.id = line_id(j, adapter, lineno);
    p.question = j.at("question").get<std::string>();
    for (const auto& c : j.at("choices")) p.choices.push_back(c.get<std::string>());
    p.answer_index = j.at("answer_index").get<std::size_t>();
    p.form = detect_form(j, p.question);
    return p;
}

std::vector<StatementGroup> adapt_mcq(const std::vector<std::filesystem::path>& inputs,
                                      const ForgeOptions& options) {
    require_single_input(inputs, "mcq");
    std::vector<StatementGroup> groups;
    for (const RawLine& raw : read_jsonl(inputs[0])) {
        MultipleChoiceProblem p = mc_problem_from(raw.value, "mcq", raw.lineno);
        StatementGroup group = convert_multiple_choice(p);
        if (options.sampler != nullptr) {
            for (Statement& st : augment_falsehoods(p, *options.sampler, options.falsehoods)) {
                group.statements.push_back(std::move(st));
            }
            require_valid(group);
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<StatementGroup> adapt_boolq(const std::vector<std::filesystem::path>& inputs,
                                        const ForgeOptions&) {
    require_single_input(inputs, "boolq");
    std::vector<StatementGroup> groups;
    for (const RawLine& raw : read_jsonl(inputs[0])) {
        BooleanProblem p;
        p.id = line_id(raw.value, "boolq", raw.lineno);
        p.question = raw.value.at("question").get<std::string>();
        p.answer = raw.value.at("answer").get<bool>();
        groups.push_back(convert_boolean(p));
    }
    return groups;
}

std::vector<StatementGroup> adapt_kb(const std::vector<std::filesystem::path>& inputs,
                                     const ForgeOptions& options) {
    require_single_input(inputs, "kb");
    std::vector<RawLine> lines = read_jsonl(inputs[0]);
    std::vector<std::string> pool;
    for (const RawLine& raw : lines) {
        pool.push_back(raw.value.at("subject").get<std::string>());
    }
    std::vector<StatementGroup> groups;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        KBEntry entry;
        entry.id = line_id(lines[i].value, "kb", lines[i].lineno);
        entry.subject = lines[i].value.at("subject").get<std::string>();
        entry.text = lines[i].value.at("text").get<std::string>();
        Rng rng(derive_seed(options.seed, "kb", i));
        groups.push_back(perturb_kb_entry(entry, pool, options.kb_k, rng));
    }
    return groups;
}

std::vector<StatementGroup> adapt_skd(const std::vector<std::filesystem::path>& inputs,
                                      const ForgeOptions& options) {
    require_single_input(inputs, "skd");
    std::vector<StatementGroup> groups;
    std::size_t index = 0;
    for (const RawLine& raw : read_jsonl(inputs[0])) {
        KnowledgeTriple triple;
        triple.id = line_id(raw.value, "skd", raw.lineno);
        triple.head = raw.value.at("head").get<std::string>();
        triple.relation = raw.value.at("relation").get<std::string>();
        triple.tail = raw.value.at("tail").get<std::string>();
        triple.valid = raw.value.at("valid").get<int>();
        Rng rng(derive_seed(options.seed, "skd", index++));
        StatementGroup group;
        group.group_id = triple.id;
        group.kind = GroupKind::boolean;
        group.statements.push_back(render_skd_triple(triple, default_name_pool(), rng));
        require_valid(group);
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<StatementGroup> adapt_com2sense(const std::vector<std::filesystem::path>& inputs,
                                            const ForgeOptions&) {
    require_single_input(inputs, "com2sense");
    std::vector<StatementGroup> groups;
    for (const RawLine& raw : read_jsonl(inputs[0])) {
        int correct = raw.value.at("correct").get<int>();
        if (correct != 1 && correct != 2) {
            throw IoFailure(inputs[0].string() + ":" + std::to_string(raw.lineno) +
                            ": 'correct' must be 1 or 2");
        }
        MultipleChoiceProblem p;
        p.id = line_id(raw.value, "com2sense", raw.lineno);
        p.choices = {raw.value.at("sent_1").get<std::string>(),
                     raw.value.at("sent_2").get<std::string>()};
        p.answer_index = static_cast<std::size_t>(correct - 1);
        p.form = QuestionForm::choices_only;
        groups.push_back(convert_multiple_choice(p));
    }
    return groups;
}

std::vector<StatementGroup> adapt_cycic(const std::vector<std::filesystem::path>& inputs,
                                        const ForgeOptions&) {
    require_single_input(inputs, "cycic");
    std::vector<StatementGroup> groups;
    for (const RawLine& raw : read_jsonl(inputs[0])) {
        if (raw.value.at("type").get<std::string>() != "mc") continue;
        groups.push_back(convert_multiple_choice(mc_problem_from(raw.value, "cycic", raw.lineno)));
    }
    return groups;
}

std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::vector<StatementGroup> adapt_comve(const std::vector<std::filesystem::path>& inputs,
                                        const ForgeOptions&) {
    require_single_input(inputs, "comve");
    std::ifstream in(inputs[0], std::ios::binary);
    if (!in) throw IoFailure("cannot open " + inputs[0].string());
    std::vector<StatementGroup> groups;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!header_seen) {
            header_seen = true; // id,sent0,sent1,against
            continue;
        }
        std::vector<std::string> fields = parse_csv_row(line);
        if (fields.size() != 4) {
            throw IoFailure(inputs[0].string() + ":" + std::to_string(lineno) +
                            ": expected 4 fields, got " + std::to_string(fields.size()));
        }
        if (fields[3] != "0" && fields[3] != "1") {
            throw IoFailure(inputs[0].string() + ":" + std::to_string(lineno) +
                            ": 'against' must be 0 or 1");
        }
        MultipleChoiceProblem p;
        p.id = fields[0].empty() ? "comve-" + std::to_string(lineno) : fields[0];
        p.choices = {fields[1], fields[2]};
        p.answer_index = fields[3] == "0" ? 1u : 0u;
        p.form = QuestionForm::choices_only;
        groups.push_back(convert_multiple_choice(p));
    }
    return groups;
}

std::vector<StatementGroup> adapt_i2d2(const std::vector<std::filesystem::path>& inputs,
                                       const ForgeOptions&) {
    if (inputs.empty()) throw InvalidArgument("adapter 'i2d2' needs at least one input file");
    std::vector<StatementGroup> groups;
    for (std::size_t f = 0; f < inputs.size(); ++f) {
        for (const RawLine& raw : read_jsonl(inputs[f])) {
            std::string id = line_id(raw.value, "i2d2-" + std::to_string(f), raw.lineno);
            StatementGroup group;
            group.group_id = id;
            group.kind = GroupKind::boolean;
            Statement st;
            st.text = raw.value.at("statement").get<std::string>();
            st.label = raw.value.at("label").get<bool>();
            st.origin = Origin::boolean;
            st.source_id = id + "#0";
            group.statements.push_back(std::move(st));
            require_valid(group);
            groups.push_back(std::move(group));
        }
    }
    return groups;
}

using AdapterFn = std::vector<StatementGroup> (*)(const std::vector<std::filesystem::path>&,
                                                  const ForgeOptions&);

const std::map<std::string, AdapterFn>& adapter_table() {
    static const std::map<std::string, AdapterFn> table{
        {"mcq", adapt_mcq},       {"boolq", adapt_boolq},
        {"kb", adapt_kb},         {"skd", adapt_skd},
        {"com2sense", adapt_com2sense}, {"cycic", adapt_cycic},
        {"comve", adapt_comve},   {"i2d2", adapt_i2d2},
    };
    return table;
}

} // namespace

std::vector<StatementGroup> run_adapter(const std::string& name,
                                        const std::vector<std::filesystem::path>& inputs,
                                        const ForgeOptions& options) {
    auto it = adapter_table().find(name);
    if (it == adapter_table().end()) {
        throw InvalidArgument("unknown adapter: " + name);
    }
    return it->second(inputs, options);
}

const std::vector<std::string>& adapter_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : adapter_table()) out.push_back(name);
        return out;
    }();
    return names;
}

} // namespace verity

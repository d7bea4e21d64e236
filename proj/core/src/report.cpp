#include "verity/report.hpp"

#include "verity/errors.hpp"
#include "verity/jsonl.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace verity {
namespace {

// Shortest round-trip decimal form, same convention the JSON writer uses, so
// report and curve files are byte-stable across runs.
std::string fmt_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw InvalidArgument("fmt_double: unrepresentable value");
    }
    return std::string(buf.data(), ptr);
}

std::string fmt_fixed(double value) {
    std::array<char, 32> buf{};
    int written = std::snprintf(buf.data(), buf.size(), "%.6f", value);
    return std::string(buf.data(), static_cast<std::size_t>(written));
}

nlohmann::ordered_json benchmark_to_json(const BenchmarkMetrics& m) {
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["kind"] = to_string(m.kind);
    j["balanced"] = m.balanced;
    j["n_groups"] = m.n_groups;
    j["n_statements"] = m.n_statements;
    if (m.acc_mc) {
        j["acc_mc"] = *m.acc_mc;
        j["tied_groups"] = m.tied_groups;
    }
    if (m.acc_bool) {
        j["acc_bool"] = *m.acc_bool;
    }
    j["auroc"] = m.auroc;
    j["ap"] = m.ap;
    j["ece"] = m.ece;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoFailure("failed writing " + path.string());
    }
}

}  // namespace

std::vector<BenchmarkSpec> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open manifest " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoFailure("manifest " + path.string() + ": " + e.what());
    }
    const nlohmann::json* entries = &doc;
    if (doc.is_object()) {
        if (!doc.contains("benchmarks")) {
            throw InvalidArgument("manifest " + path.string() +
                                  ": expected an array or a \"benchmarks\" key");
        }
        entries = &doc.at("benchmarks");
    }
    if (!entries->is_array() || entries->empty()) {
        throw InvalidArgument("manifest " + path.string() +
                              ": needs a non-empty benchmark array");
    }
    std::filesystem::path base = path.parent_path();
    std::vector<BenchmarkSpec> specs;
    for (const nlohmann::json& entry : *entries) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("path") ||
            !entry.contains("kind") || !entry.contains("balanced")) {
            throw InvalidArgument("manifest " + path.string() +
                                  ": every entry needs name, path, kind, balanced");
        }
        BenchmarkSpec spec;
        spec.name = entry.at("name").get<std::string>();
        std::filesystem::path p = entry.at("path").get<std::string>();
        spec.path = p.is_absolute() ? p : base / p;
        spec.kind = kind_from_string(entry.at("kind").get<std::string>());
        spec.balanced = entry.at("balanced").get<bool>();
        specs.push_back(std::move(spec));
    }
    return specs;
}

BenchmarkEvaluation evaluate_benchmark(const VerifierModel& model,
                                       const BenchmarkSpec& spec,
                                       std::span<const StatementGroup> groups,
                                       const CalibrationConfig& ece_config) {
    if (groups.empty()) {
        throw EmptyInput("benchmark '" + spec.name + "': no groups");
    }
    BenchmarkEvaluation out;
    out.groups.reserve(groups.size());
    for (const StatementGroup& group : groups) {
        if (group.kind != spec.kind) {
            throw WrongKind("benchmark '" + spec.name + "': group '" + group.group_id +
                            "' is " + to_string(group.kind) + ", manifest declares " +
                            to_string(spec.kind));
        }
        ScoredGroup scored;
        scored.group_id = group.group_id;
        scored.kind = group.kind;
        scored.statements = model.score_group(group);
        for (const ScoredStatement& s : scored.statements) {
            out.scores.push_back(s.score);
            out.labels.push_back(s.statement.label ? 1 : 0);
        }
        out.groups.push_back(std::move(scored));
    }

    BenchmarkMetrics& m = out.metrics;
    m.name = spec.name;
    m.kind = spec.kind;
    m.balanced = spec.balanced;
    m.n_groups = out.groups.size();
    m.n_statements = out.scores.size();
    if (spec.kind == GroupKind::multiple_choice) {
        McAccuracy acc = accuracy_mc(out.groups);
        m.acc_mc = acc.accuracy;
        m.tied_groups = acc.tied_groups;
    } else if (spec.balanced) {
        std::vector<ScoredStatement> flat;
        for (const ScoredGroup& g : out.groups) {
            flat.insert(flat.end(), g.statements.begin(), g.statements.end());
        }
        m.acc_bool = accuracy_bool(flat);
    }
    m.auroc = auroc(out.scores, out.labels);
    m.ap = average_precision(out.scores, out.labels);
    m.ece = compute_ece(out.scores, out.labels, ece_config);
    return out;
}

EvaluationReport evaluate_manifest(const VerifierModel& model,
                                   const std::filesystem::path& manifest_path,
                                   const CalibrationConfig& ece_config,
                                   std::vector<BenchmarkEvaluation>* detail) {
    EvaluationReport report;
    report.temperature = model.temperature();
    report.ece_config = ece_config;
    for (const BenchmarkSpec& spec : load_manifest(manifest_path)) {
        std::vector<StatementGroup> groups = read_group_jsonl(spec.path);
        BenchmarkEvaluation evaluation = evaluate_benchmark(model, spec, groups, ece_config);
        report.benchmarks.push_back(evaluation.metrics);
        if (detail != nullptr) {
            detail->push_back(std::move(evaluation));
        }
    }
    std::span<const BenchmarkMetrics> all(report.benchmarks);
    bool all_mc = std::all_of(all.begin(), all.end(),
                              [](const BenchmarkMetrics& m) { return m.acc_mc.has_value(); });
    bool all_bool = std::all_of(all.begin(), all.end(),
                                [](const BenchmarkMetrics& m) { return m.acc_bool.has_value(); });
    if (all_mc) {
        report.macro["acc_mc"] = macro_average(all, "acc_mc");
    }
    if (all_bool) {
        report.macro["acc_bool"] = macro_average(all, "acc_bool");
    }
    report.macro["auroc"] = macro_average(all, "auroc");
    report.macro["ap"] = macro_average(all, "ap");
    report.macro["ece"] = macro_average(all, "ece");
    return report;
}

std::string report_to_json(const EvaluationReport& report) {
    nlohmann::ordered_json j;
    j["benchmarks"] = nlohmann::ordered_json::array();
    for (const BenchmarkMetrics& m : report.benchmarks) {
        j["benchmarks"].push_back(benchmark_to_json(m));
    }
    nlohmann::ordered_json macro;
    for (const auto& [name, value] : report.macro) {
        macro[name] = value;
    }
    j["macro"] = macro;
    j["conventions"] = {
        {"argmax_ties", "lowest_index_wins"},
        {"acc_bool_threshold", "logit_strictly_positive"},
        {"auroc", "pair_counting_ties_half"},
        {"ap", "score_descending_stable_input_order"},
        {"roc_interpolation", "step"},
        {"ece_binning", to_string(report.ece_config.binning)},
        {"ece_bins", report.ece_config.bins},
    };
    j["temperature"] = report.temperature;
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvaluationReport& report) {
    std::vector<std::array<std::string, 10>> rows;
    rows.push_back({"benchmark", "kind", "groups", "stmts", "acc_mc", "acc_bool", "auroc",
                    "ap", "ece", "ties"});
    auto opt_cell = [](const std::optional<double>& v) {
        return v ? fmt_fixed(*v) : std::string("-");
    };
    for (const BenchmarkMetrics& m : report.benchmarks) {
        rows.push_back({m.name, to_string(m.kind), std::to_string(m.n_groups),
                        std::to_string(m.n_statements), opt_cell(m.acc_mc),
                        opt_cell(m.acc_bool), fmt_fixed(m.auroc), fmt_fixed(m.ap),
                        fmt_fixed(m.ece),
                        m.acc_mc ? std::to_string(m.tied_groups) : std::string("-")});
    }
    auto macro_cell = [&](const char* name) {
        auto it = report.macro.find(name);
        return it == report.macro.end() ? std::string("-") : fmt_fixed(it->second);
    };
    rows.push_back({"macro", "-", "-", "-", macro_cell("acc_mc"), macro_cell("acc_bool"),
                    macro_cell("auroc"), macro_cell("ap"), macro_cell("ece"), "-"});

    std::array<std::size_t, 10> widths{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c] << std::string(widths[c] - row[c].size(), ' ');
            out << (c + 1 < row.size() ? "  " : "");
        }
        out << '\n';
    }
    return out.str();
}

EvaluationReport report_from_json(const std::string& text, const std::string& name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoFailure(name + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("benchmarks")) {
        throw InvalidArgument(name + ": not an evaluation report");
    }
    EvaluationReport report;
    for (const nlohmann::json& b : doc.at("benchmarks")) {
        BenchmarkMetrics m;
        m.name = b.at("name").get<std::string>();
        m.kind = kind_from_string(b.at("kind").get<std::string>());
        m.balanced = b.at("balanced").get<bool>();
        m.n_groups = b.at("n_groups").get<std::size_t>();
        m.n_statements = b.at("n_statements").get<std::size_t>();
        if (b.contains("acc_mc")) {
            m.acc_mc = b.at("acc_mc").get<double>();
            m.tied_groups = b.at("tied_groups").get<std::size_t>();
        }
        if (b.contains("acc_bool")) {
            m.acc_bool = b.at("acc_bool").get<double>();
        }
        m.auroc = b.at("auroc").get<double>();
        m.ap = b.at("ap").get<double>();
        m.ece = b.at("ece").get<double>();
        report.benchmarks.push_back(std::move(m));
    }
    if (doc.contains("macro")) {
        for (const auto& [key, value] : doc.at("macro").items()) {
            report.macro[key] = value.get<double>();
        }
    }
    if (doc.contains("temperature")) {
        report.temperature = doc.at("temperature").get<double>();
    }
    if (doc.contains("conventions")) {
        const nlohmann::json& conv = doc.at("conventions");
        if (conv.contains("ece_binning")) {
            report.ece_config.binning =
                binning_from_string(conv.at("ece_binning").get<std::string>());
        }
        if (conv.contains("ece_bins")) {
            report.ece_config.bins = conv.at("ece_bins").get<std::size_t>();
        }
    }
    return report;
}

EvaluationReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure("cannot open report " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return report_from_json(text.str(), path.string());
}

void write_curve_files(const BenchmarkEvaluation& evaluation,
                       const std::filesystem::path& dir,
                       const CalibrationConfig& ece_config) {
    std::filesystem::create_directories(dir);
    const std::string& name = evaluation.metrics.name;

    std::ostringstream roc;
    roc << "fpr,tpr\n";
    for (const RocPoint& p : roc_curve(evaluation.scores, evaluation.labels)) {
        roc << fmt_double(p.fpr) << ',' << fmt_double(p.tpr) << '\n';
    }
    write_text_file(dir / (name + "_roc.csv"), roc.str());

    std::ostringstream pr;
    pr << "recall,precision\n";
    for (const PrPoint& p : pr_curve(evaluation.scores, evaluation.labels)) {
        pr << fmt_double(p.recall) << ',' << fmt_double(p.precision) << '\n';
    }
    write_text_file(dir / (name + "_pr.csv"), pr.str());

    std::ostringstream rel;
    rel << "bin_center,mean_score,accuracy,count\n";
    for (const ReliabilityRow& row :
         reliability_curve(evaluation.scores, evaluation.labels, ece_config)) {
        rel << fmt_double(row.bin_center) << ',' << fmt_double(row.mean_score) << ','
            << fmt_double(row.accuracy) << ',' << row.count << '\n';
    }
    write_text_file(dir / (name + "_reliability.csv"), rel.str());
}

}  // namespace verity

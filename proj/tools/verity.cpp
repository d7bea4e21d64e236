#include "verity/adapters.hpp"
#include "verity/batching.hpp"
#include "verity/calibration.hpp"
#include "verity/checkpoint.hpp"
#include "verity/errors.hpp"
#include "verity/filter.hpp"
#include "verity/forge.hpp"
#include "verity/jsonl.hpp"
#include "verity/report.hpp"
#include "verity/rng.hpp"
#include "verity/synthetic.hpp"
#include "verity/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

// One-line resolved-configuration header, printed before any work so a run is
// reproducible from its output alone.
void print_effective_config(ordered_json config) {
    std::cout << config.dump() << "\n";
}

struct ConvertArgs {
    std::string adapter;
    std::vector<std::string> inputs;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t kb_k = 3;
    bool augment = false;
    std::string sampler;
    verity::FalsehoodOptions falsehoods;
};

void run_forge_convert(const ConvertArgs& args) {
    print_effective_config({
        {"command", "forge convert"},
        {"adapter", args.adapter},
        {"in", args.inputs},
        {"out", args.out},
        {"seed", args.seed},
        {"kb_k", args.kb_k},
        {"augment_falsehoods", args.augment},
        {"sampler", args.sampler},
        {"n", args.falsehoods.n},
        {"k", args.falsehoods.k},
        {"pmax", args.falsehoods.p_max},
    });
    verity::ForgeOptions options;
    options.seed = args.seed;
    options.kb_k = args.kb_k;
    options.falsehoods = args.falsehoods;
    std::unique_ptr<verity::FileAnswerSampler> sampler;
    if (args.augment) {
        if (args.sampler.empty()) {
            throw verity::InvalidArgument("--augment-falsehoods needs --sampler");
        }
        sampler = std::make_unique<verity::FileAnswerSampler>(args.sampler);
        options.sampler = sampler.get();
    }
    std::vector<std::filesystem::path> inputs(args.inputs.begin(), args.inputs.end());
    std::vector<verity::StatementGroup> groups =
        verity::run_adapter(args.adapter, inputs, options);
    verity::write_group_jsonl(args.out, groups);
    std::cout << "wrote " << groups.size() << " groups to " << args.out << "\n";
}

struct SynthArgs {
    verity::SyntheticSpec spec;
    std::string style = "qa";
    std::string stage = "a";
    std::string out;
    std::uint64_t seed = 0;
};

void run_forge_synth(const SynthArgs& args) {
    print_effective_config({
        {"command", "forge synth"},
        {"style", args.style},
        {"n_groups", args.spec.n_groups},
        {"boolean_fraction", args.spec.boolean_fraction},
        {"min_choices", args.spec.min_choices},
        {"max_choices", args.spec.max_choices},
        {"name", args.spec.name},
        {"stage", args.stage},
        {"out", args.out},
        {"seed", args.seed},
    });
    verity::SyntheticSpec spec = args.spec;
    spec.style = verity::synthetic_style_from_string(args.style);
    spec.stage = args.stage == "a" ? verity::Stage::stage_a : verity::Stage::stage_b;
    verity::DatasetPartition corpus = verity::generate_synthetic_corpus(spec, args.seed);
    verity::write_group_jsonl(args.out, corpus.groups);
    std::cout << "wrote " << corpus.groups.size() << " groups to " << args.out << "\n";
}

struct TrainArgs {
    std::string stage_a;
    std::string stage_b;
    std::string config;
    std::string out;
    std::string resume;
    std::string log;
    std::string dump_batches;
    std::optional<std::uint64_t> seed;
};

ordered_json train_config_json(const verity::TrainConfig& c) {
    return {
        {"seed", c.seed},
        {"dim", c.dim},
        {"vocab_max", c.vocab_max},
        {"max_tokens", c.batch.max_tokens},
        {"groups_per_batch", c.batch.groups_per_batch},
        {"cap_per_group", c.batch.cap_per_group},
        {"freeze_cap", c.freeze_cap},
        {"steps_a", c.stage_a.steps},
        {"steps_b", c.stage_b.steps},
        {"lr_a", c.stage_a.learning_rate},
        {"lr_b", c.stage_b.learning_rate},
        {"alpha", c.weights.alpha},
        {"beta", c.weights.beta},
        {"gamma", c.weights.gamma},
        {"tau", c.weights.tau},
        {"checkpoint_every", c.checkpoint_every},
        {"weight_decay", c.weight_decay},
        {"grad_clip", c.grad_clip},
        {"warmup_steps", c.warmup_steps},
    };
}

void dump_epoch_zero_batches(const verity::TrainConfig& config,
                             const verity::DatasetPartition& data, const std::string& stage_name,
                             std::ostream& out) {
    verity::BatchConfig bc = config.batch;
    bc.seed = verity::derive_seed(config.seed, "stage_" + stage_name + "_epoch", 0);
    if (config.freeze_cap) {
        bc.cap_seed = verity::derive_seed(config.seed, "stage_" + stage_name + "_cap");
    }
    std::vector<verity::Batch> batches = verity::build_batches(data.groups, bc);
    for (std::size_t i = 0; i < batches.size(); ++i) {
        ordered_json ids = ordered_json::array();
        for (const verity::StatementGroup& g : batches[i].groups) {
            ids.push_back(g.group_id);
        }
        out << ordered_json{{"stage", stage_name},
                            {"epoch", 0},
                            {"batch", i},
                            {"groups", ids}}
                   .dump()
            << "\n";
    }
}

void run_train(const TrainArgs& args) {
    verity::TrainConfig config = verity::parse_train_config(args.config);
    if (args.seed) {
        config.seed = *args.seed;
    }
    config.validate();

    std::filesystem::path out_dir = args.out;
    std::filesystem::create_directories(out_dir);
    std::string log_path =
        args.log.empty() ? (out_dir / "train_log.jsonl").string() : args.log;

    ordered_json header = train_config_json(config);
    header["command"] = "train";
    header["stage_a_data"] = args.stage_a;
    header["stage_b_data"] = args.stage_b;
    header["config_file"] = args.config;
    header["out"] = args.out;
    header["resume"] = args.resume;
    header["log"] = log_path;
    print_effective_config(header);

    verity::DatasetPartition a;
    a.name = std::filesystem::path(args.stage_a).stem().string();
    a.stage = verity::Stage::stage_a;
    a.groups = verity::read_group_jsonl(args.stage_a);
    verity::DatasetPartition b;
    b.name = std::filesystem::path(args.stage_b).stem().string();
    b.stage = verity::Stage::stage_b;
    b.groups = verity::read_group_jsonl(args.stage_b);

    verity::Trainer trainer(config);
    if (!args.dump_batches.empty()) {
        std::ofstream dump(args.dump_batches, std::ios::binary);
        if (!dump) {
            throw verity::IoFailure("cannot open " + args.dump_batches + " for writing");
        }
        dump_epoch_zero_batches(config, a, "a", dump);
        dump_epoch_zero_batches(config, b, "b", dump);
    }

    std::ofstream log(log_path, std::ios::binary);
    if (!log) {
        throw verity::IoFailure("cannot open " + log_path + " for writing");
    }

    verity::VerifierModel model;
    if (args.resume.empty()) {
        model = trainer.run_pipeline(a, b, &log, out_dir);
    } else {
        verity::LoadedCheckpoint loaded = verity::load_checkpoint(args.resume);
        if (!loaded.state) {
            throw verity::InvalidArgument("checkpoint " + args.resume +
                                          " has no optimizer state to resume from");
        }
        model = std::move(loaded.model);
        trainer.resume_pipeline(model, *loaded.state, a, b, &log, out_dir);
    }
    std::filesystem::path model_path = out_dir / "model.ckpt";
    verity::save_checkpoint(model_path, model);
    std::cout << "wrote " << model_path.string() << "\n";
}

struct CalibrateArgs {
    std::string scores;
    std::string out;
    std::string binning = "equal_mass";
    std::size_t bins = 10;
};

void run_calibrate(const CalibrateArgs& args) {
    print_effective_config({
        {"command", "calibrate"},
        {"scores", args.scores},
        {"out", args.out},
        {"binning", args.binning},
        {"bins", args.bins},
    });
    std::vector<verity::ScoreRecord> records = verity::read_score_jsonl(args.scores);
    if (records.empty()) {
        throw verity::EmptyInput("score file " + args.scores + " holds no records");
    }
    std::vector<double> logits;
    std::vector<int> labels;
    logits.reserve(records.size());
    labels.reserve(records.size());
    for (const verity::ScoreRecord& r : records) {
        logits.push_back(r.logit);
        labels.push_back(r.label ? 1 : 0);
    }
    verity::CalibrationConfig config;
    config.bins = args.bins;
    config.binning = verity::binning_from_string(args.binning);
    std::string fitted_on = std::filesystem::path(args.scores).filename().string() + ":" +
                            std::to_string(records.size());
    verity::CalibrationArtifact artifact =
        verity::fit_temperature(logits, labels, config, fitted_on);
    verity::save_calibration(args.out, artifact);
    std::cout << "T=" << artifact.temperature << " ece_before=" << artifact.ece_before
              << " ece_after=" << artifact.ece_after << " -> " << args.out << "\n";
}

struct EvaluateArgs {
    std::string manifest;
    std::string model;
    std::string calibration;
    std::string out;
    std::string table;
    std::string curves_dir;
    std::string out_scores;
    std::string binning = "equal_mass";
    std::size_t bins = 10;
};

void run_evaluate(const EvaluateArgs& args) {
    print_effective_config({
        {"command", "evaluate"},
        {"manifest", args.manifest},
        {"model", args.model},
        {"calibration", args.calibration},
        {"out", args.out},
        {"table", args.table},
        {"curves_dir", args.curves_dir},
        {"out_scores", args.out_scores},
        {"binning", args.binning},
        {"bins", args.bins},
    });
    verity::LoadedCheckpoint loaded = verity::load_checkpoint(args.model);
    verity::VerifierModel model = std::move(loaded.model);
    if (!args.calibration.empty()) {
        verity::CalibrationArtifact artifact = verity::load_calibration(args.calibration);
        model.set_temperature(artifact.temperature);
    }
    verity::CalibrationConfig config;
    config.bins = args.bins;
    config.binning = verity::binning_from_string(args.binning);

    std::vector<verity::BenchmarkEvaluation> detail;
    verity::EvaluationReport report =
        verity::evaluate_manifest(model, args.manifest, config, &detail);

    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
        throw verity::IoFailure("cannot open " + args.out + " for writing");
    }
    out << verity::report_to_json(report);
    if (!out) {
        throw verity::IoFailure("failed writing " + args.out);
    }

    std::string table = verity::report_to_table(report);
    std::cout << table;
    if (!args.table.empty()) {
        std::ofstream table_out(args.table, std::ios::binary);
        if (!table_out) {
            throw verity::IoFailure("cannot open " + args.table + " for writing");
        }
        table_out << table;
    }
    if (!args.curves_dir.empty()) {
        for (const verity::BenchmarkEvaluation& evaluation : detail) {
            verity::write_curve_files(evaluation, args.curves_dir, config);
        }
    }
    if (!args.out_scores.empty()) {
        std::vector<verity::ScoreRecord> records;
        for (const verity::BenchmarkEvaluation& evaluation : detail) {
            for (const verity::ScoredGroup& group : evaluation.groups) {
                for (const verity::ScoredStatement& s : group.statements) {
                    records.push_back({s.statement.source_id, s.logit, s.score,
                                       s.statement.label});
                }
            }
        }
        verity::write_score_jsonl(args.out_scores, records);
    }
}

struct FilterArgs {
    std::string model;
    std::string calibration;
    std::string in;
    double threshold = 0.5;
    std::string out_kept;
    std::string out_dropped;
    std::string out_scores;
};

void run_filter(const FilterArgs& args) {
    print_effective_config({
        {"command", "filter"},
        {"model", args.model},
        {"calibration", args.calibration},
        {"in", args.in},
        {"threshold", args.threshold},
        {"out_kept", args.out_kept},
        {"out_dropped", args.out_dropped},
        {"out_scores", args.out_scores},
    });
    verity::LoadedCheckpoint loaded = verity::load_checkpoint(args.model);
    verity::VerifierModel model = std::move(loaded.model);
    if (!args.calibration.empty()) {
        verity::CalibrationArtifact artifact = verity::load_calibration(args.calibration);
        model.set_temperature(artifact.temperature);
    }
    std::vector<std::string> texts = verity::read_statement_lines(args.in);
    verity::FilterResult result = verity::filter_knowledge(texts, model, args.threshold);
    verity::write_statement_lines(args.out_kept, result.kept);
    verity::write_statement_lines(args.out_dropped, result.dropped);
    if (!args.out_scores.empty()) {
        std::vector<verity::ScoreRecord> records;
        for (const verity::ScoredStatement& s : result.scored) {
            records.push_back({s.statement.source_id, s.logit, s.score, s.statement.label});
        }
        verity::write_score_jsonl(args.out_scores, records);
    }
    std::cout << "kept " << result.kept.size() << " of " << texts.size() << " statements\n";
}

struct ReportArgs {
    std::string in;
    std::string out;
};

void run_report(const ReportArgs& args) {
    print_effective_config({
        {"command", "report"},
        {"in", args.in},
        {"out", args.out},
    });
    verity::EvaluationReport report = verity::load_report(args.in);
    std::string table = verity::report_to_table(report);
    std::cout << table;
    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) {
            throw verity::IoFailure("cannot open " + args.out + " for writing");
        }
        out << table;
    }
}

ordered_json error_line(const std::string& code, const std::string& message) {
    return {{"error", code}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verity: statement plausibility scoring toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "verity 0.1.0");

    // forge
    CLI::App* forge = app.add_subcommand("forge", "Build statement groups from raw sources");
    forge->require_subcommand(1);

    ConvertArgs convert_args;
    CLI::App* convert = forge->add_subcommand("convert", "Run a source adapter");
    convert->add_option("--adapter", convert_args.adapter, "Adapter name")
        ->required()
        ->check(CLI::IsMember(verity::adapter_names()));
    convert->add_option("--in", convert_args.inputs, "Raw input file (repeatable)")->required();
    convert->add_option("--out", convert_args.out, "Statement-group JSONL output")->required();
    convert->add_option("--seed", convert_args.seed, "Base seed")->envname("VERITY_SEED");
    convert->add_option("--kb-k", convert_args.kb_k, "Perturbations per KB entry");
    convert->add_flag("--augment-falsehoods", convert_args.augment,
                      "Append sampled falsehoods to multiple-choice groups");
    convert->add_option("--sampler", convert_args.sampler, "Answer sampler JSON file");
    convert->add_option("--n", convert_args.falsehoods.n, "Answers to sample per question");
    convert->add_option("--k", convert_args.falsehoods.k, "Falsehoods to keep per question");
    convert->add_option("--pmax", convert_args.falsehoods.p_max,
                        "Keep only answers below this probability");
    convert->callback([&] { run_forge_convert(convert_args); });

    SynthArgs synth_args;
    CLI::App* synth = forge->add_subcommand("synth", "Generate the synthetic corpus");
    synth->add_option("--style", synth_args.style, "Corpus style")
        ->check(CLI::IsMember({"qa", "kb"}));
    synth->add_option("--n-groups", synth_args.spec.n_groups, "Groups to generate")->required();
    synth->add_option("--boolean-fraction", synth_args.spec.boolean_fraction,
                      "Fraction of boolean groups (qa style)");
    synth->add_option("--min-choices", synth_args.spec.min_choices, "Smallest group width");
    synth->add_option("--max-choices", synth_args.spec.max_choices, "Largest group width");
    synth->add_option("--name", synth_args.spec.name, "Corpus name prefix");
    synth->add_option("--stage", synth_args.stage, "Training stage the corpus feeds")
        ->check(CLI::IsMember({"a", "b"}));
    synth->add_option("--out", synth_args.out, "Statement-group JSONL output")->required();
    synth->add_option("--seed", synth_args.seed, "Base seed")->envname("VERITY_SEED");
    synth->callback([&] { run_forge_synth(synth_args); });

    // train
    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Two-stage training");
    train->add_option("--stage-a", train_args.stage_a, "Stage-A statement-group JSONL")
        ->required();
    train->add_option("--stage-b", train_args.stage_b, "Stage-B statement-group JSONL")
        ->required();
    train->add_option("--config", train_args.config, "Training config (key=value lines)")
        ->required();
    train->add_option("--out", train_args.out, "Output directory")->required();
    train->add_option("--resume", train_args.resume, "Checkpoint to resume from");
    train->add_option("--log", train_args.log, "Loss log JSONL (default <out>/train_log.jsonl)");
    train->add_option("--dump-batches", train_args.dump_batches,
                      "Write epoch-0 batch composition JSONL");
    train->add_option("--seed", train_args.seed, "Override the config seed")
        ->envname("VERITY_SEED");
    train->callback([&] { run_train(train_args); });

    // calibrate
    CalibrateArgs calibrate_args;
    std::uint64_t calibrate_seed = 0;
    CLI::App* calibrate = app.add_subcommand("calibrate", "Fit the scaling temperature");
    calibrate->add_option("--scores", calibrate_args.scores, "Score JSONL")->required();
    calibrate->add_option("--out", calibrate_args.out, "Calibration artifact JSON")->required();
    calibrate->add_option("--binning", calibrate_args.binning, "ECE binning")
        ->check(CLI::IsMember({"equal_mass", "equal_width"}));
    calibrate->add_option("--bins", calibrate_args.bins, "ECE bin count");
    calibrate->add_option("--seed", calibrate_seed, "Unused; accepted for uniformity")
        ->envname("VERITY_SEED");
    calibrate->callback([&] { run_calibrate(calibrate_args); });

    // evaluate
    EvaluateArgs evaluate_args;
    std::uint64_t evaluate_seed = 0;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score benchmarks from a manifest");
    evaluate->add_option("--manifest", evaluate_args.manifest, "Benchmark manifest JSON")
        ->required();
    evaluate->add_option("--model", evaluate_args.model, "Model checkpoint")->required();
    evaluate->add_option("--calibration", evaluate_args.calibration,
                         "Calibration artifact JSON");
    evaluate->add_option("--out", evaluate_args.out, "Report JSON output")->required();
    evaluate->add_option("--table", evaluate_args.table, "Also write the text table here");
    evaluate->add_option("--curves-dir", evaluate_args.curves_dir,
                         "Write ROC/PR/reliability CSVs here");
    evaluate->add_option("--out-scores", evaluate_args.out_scores,
                         "Write flat score JSONL here");
    evaluate->add_option("--binning", evaluate_args.binning, "ECE binning")
        ->check(CLI::IsMember({"equal_mass", "equal_width"}));
    evaluate->add_option("--bins", evaluate_args.bins, "ECE bin count");
    evaluate->add_option("--seed", evaluate_seed, "Unused; accepted for uniformity")
        ->envname("VERITY_SEED");
    evaluate->callback([&] { run_evaluate(evaluate_args); });

    // filter
    FilterArgs filter_args;
    std::uint64_t filter_seed = 0;
    CLI::App* filter = app.add_subcommand("filter", "Keep statements scoring above threshold");
    filter->add_option("--model", filter_args.model, "Model checkpoint")->required();
    filter->add_option("--calibration", filter_args.calibration, "Calibration artifact JSON");
    filter->add_option("--in", filter_args.in, "Statements (.txt lines or group JSONL)")
        ->required();
    filter->add_option("--threshold", filter_args.threshold, "Strict keep threshold");
    filter->add_option("--out-kept", filter_args.out_kept, "Kept statements, one per line")
        ->required();
    filter->add_option("--out-dropped", filter_args.out_dropped,
                       "Dropped statements, one per line")
        ->required();
    filter->add_option("--out-scores", filter_args.out_scores, "Write score JSONL here");
    filter->add_option("--seed", filter_seed, "Unused; accepted for uniformity")
        ->envname("VERITY_SEED");
    filter->callback([&] { run_filter(filter_args); });

    // report
    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Render a report JSON as a text table");
    report->add_option("--in", report_args.in, "Report JSON")->required();
    report->add_option("--out", report_args.out, "Write the table here too");
    report->callback([&] { run_report(report_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const verity::VerityError& e) {
        std::cerr << error_line(e.code(), e.what()).dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_line("Unhandled", e.what()).dump() << "\n";
        return 1;
    }
    return 0;
}

// Command-line front end: kb build | infer | fix | synthesize | eval.
//
// Exit codes: 0 = run completed (whatever the compilation rate),
// 1 = configuration error, 2 = required tool/environment missing.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "forge/kb.hpp"
#include "forge/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string dataset;
    std::string out_dir = "out";
    std::string backend = "mock";
    std::string mock_transcript;
    std::string kb_index;
    std::string python_env;
    std::string py_checker;
    std::string rules_path;
    int k = -1;          // -1 = unset, fall through to config/defaults
    int max_rounds = -1;
    int parallelism = -1;
    int repetitions = -1;
    bool no_self_consistency = false;
    bool raw = false;  // fix: skip inference, repair the snippet as-is
};

struct Resolved {
    forge::PipelineConfig pipeline;
    forge::LiveBackendConfig live;
    std::string backend;
    std::string mock_transcript;
    std::string kb_index;
    std::string python_env;
    std::string py_checker;
    std::string rules_path;
    std::string javac = "javac";
    int repetitions = 1;
    std::string out_dir;
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

// Precedence: CLI flag > config file > environment > built-in default.
Resolved resolve(const CliOptions& cli) {
    Resolved r;
    r.pipeline.infer.k_samples = 10;
    r.pipeline.infer.temperature = 1.0;
    r.pipeline.fix.max_rounds = 5;
    r.pipeline.fix.temperature = 0.5;
    r.pipeline.parallelism = 1;

    r.live.model_id = env_or("FORGE_MODEL", r.live.model_id);
    r.live.api_key = env_or("FORGE_API_KEY", env_or("OPENAI_API_KEY", ""));

    json cfg = json::object();
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + cli.config_path);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw CLI::ValidationError("--config", e.what());
        }
    }
    auto get = [&](const char* key, auto fallback) {
        using T = decltype(fallback);
        return cfg.contains(key) ? cfg[key].get<T>() : fallback;
    };
    r.pipeline.infer.k_samples = get("k", r.pipeline.infer.k_samples);
    r.pipeline.infer.temperature = get("temperature_infer", r.pipeline.infer.temperature);
    r.pipeline.fix.max_rounds = get("max_rounds", r.pipeline.fix.max_rounds);
    r.pipeline.fix.temperature = get("temperature_fix", r.pipeline.fix.temperature);
    r.pipeline.fix.history_token_budget =
        get("history_token_budget", r.pipeline.fix.history_token_budget);
    std::string guard = get("guard_mode", std::string("warn"));
    if (guard == "reject")
        r.pipeline.fix.guard_mode = forge::GuardMode::Reject;
    else if (guard != "warn")
        throw CLI::ValidationError("--config", "guard_mode must be warn or reject");
    r.pipeline.parallelism = get("parallelism", r.pipeline.parallelism);
    r.repetitions = get("repetitions", 1);
    r.kb_index = get("kb_index", std::string());
    r.python_env = get("python_env", std::string());
    r.py_checker = get("py_checker", std::string());
    r.rules_path = get("rules", std::string());
    r.javac = get("javac", r.javac);
    r.live.endpoint = get("endpoint", r.live.endpoint);
    r.live.model_id = get("model_id", r.live.model_id);
    r.live.cost_ceiling = get("cost_ceiling", r.live.cost_ceiling);
    if (cfg.contains("prices")) {
        for (auto& [model, p] : cfg["prices"].items()) {
            r.live.prices.models[model] = {p.value("prompt_per_1k", 0.0),
                                           p.value("output_per_1k", 0.0)};
        }
    }

    r.backend = cli.backend;
    r.mock_transcript = cli.mock_transcript;
    r.out_dir = cli.out_dir;
    if (!cli.kb_index.empty()) r.kb_index = cli.kb_index;
    if (!cli.python_env.empty()) r.python_env = cli.python_env;
    if (!cli.py_checker.empty()) r.py_checker = cli.py_checker;
    if (!cli.rules_path.empty()) r.rules_path = cli.rules_path;
    if (cli.k >= 0) r.pipeline.infer.k_samples = cli.k;
    if (cli.no_self_consistency) r.pipeline.infer.k_samples = 1;
    if (cli.max_rounds >= 0) r.pipeline.fix.max_rounds = cli.max_rounds;
    if (cli.parallelism > 0) r.pipeline.parallelism = cli.parallelism;
    if (cli.repetitions > 0) r.repetitions = cli.repetitions;
    r.pipeline.infer.model_id = r.live.model_id;
    r.pipeline.fix.model_id = r.live.model_id;

    if (r.backend != "mock" && r.backend != "live")
        throw CLI::ValidationError("--backend", "must be mock or live");
    if (r.backend == "mock" && r.mock_transcript.empty())
        throw CLI::ValidationError("--mock-transcript", "required with --backend mock");
    if (r.backend == "live" && r.live.api_key.empty())
        throw CLI::ValidationError("backend",
                                   "live backend needs FORGE_API_KEY or OPENAI_API_KEY");
    return r;
}

std::unique_ptr<forge::Backend> make_backend(const Resolved& r,
                                             std::shared_ptr<forge::UsageLedger> ledger) {
    if (r.backend == "mock")
        return std::make_unique<forge::MockBackend>(
            forge::MockBackend::from_file(r.mock_transcript));
    return std::make_unique<forge::LiveBackend>(r.live, std::move(ledger));
}

bool dataset_has_language(const std::vector<forge::CodeSnippet>& snippets,
                          forge::Language lang) {
    for (const auto& s : snippets)
        if (s.language == lang) return true;
    return false;
}

struct ValidatorSet {
    std::unique_ptr<forge::Validator> java;
    std::unique_ptr<forge::Validator> python;
};

ValidatorSet make_validators(const Resolved& r,
                             const std::vector<forge::CodeSnippet>& snippets) {
    ValidatorSet v;
    std::optional<forge::CategoryRules> rules;
    if (!r.rules_path.empty()) rules = forge::CategoryRules::from_file(r.rules_path);
    if (dataset_has_language(snippets, forge::Language::Java)) {
        forge::JavaValidatorConfig cfg;
        cfg.javac = r.javac;
        if (rules) cfg.rules = *rules;
        v.java = std::make_unique<forge::JavaValidator>(cfg);
    }
    if (dataset_has_language(snippets, forge::Language::Python)) {
        forge::PythonValidatorConfig cfg;
        if (rules) cfg.rules = *rules;
        cfg.env_path = r.python_env.empty()
                           ? forge::find_executable("python3")
                           : r.python_env;
        std::string checker = r.py_checker.empty()
                                  ? env_or("FORGE_PYCHECK", "")
                                  : r.py_checker;
        if (checker.empty())
            throw forge::ToolMissing(
                "no static checker configured (set py_checker or FORGE_PYCHECK)");
        cfg.checker_argv = {forge::find_executable("python3"), checker};
        v.python = std::make_unique<forge::PythonValidator>(cfg);
    }
    return v;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void write_predictions(const forge::RunResult& run,
                       const std::vector<forge::CodeSnippet>& snippets,
                       const fs::path& dir) {
    std::map<std::string, forge::Language> langs;
    for (const auto& s : snippets) langs[s.id] = s.language;
    for (const auto& r : run.snippets) {
        if (!r.error.empty()) continue;
        forge::ImportSet predicted =
            forge::strip_imports(r.outcome.final_code, langs[r.snippet_id]).removed;
        write_text(dir / (r.snippet_id + ".imports"),
                   forge::render_imports(predicted, langs[r.snippet_id]));
    }
}

std::string summary_line(const forge::RunSummary& s) {
    std::ostringstream out;
    out << "F1=" << s.f1 << " Rec=" << s.recall << " Pre=" << s.precision << " CR="
        << s.compiled_count << "/" << s.total_count << " (" << s.compilation_rate * 100.0
        << "%)";
    return out.str();
}

int run_with_repetitions(const Resolved& r, const std::vector<forge::CodeSnippet>& snippets,
                         forge::PipelineConfig pipeline) {
    auto ledger = std::make_shared<forge::UsageLedger>(
        (fs::path(r.out_dir) / "usage.tsv").string());
    ValidatorSet validators = make_validators(r, snippets);
    const forge::InverseIndex* kb = nullptr;
    forge::InverseIndex index;
    if (!r.kb_index.empty()) {
        index = forge::InverseIndex::load(r.kb_index);
        kb = &index;
    }

    std::vector<forge::RunSummary> summaries;
    for (int rep = 1; rep <= r.repetitions; ++rep) {
        auto backend = make_backend(r, ledger);
        forge::PipelineConfig cfg = pipeline;
        cfg.transcript_dir =
            (fs::path(r.out_dir) /
             (r.repetitions > 1 ? "transcripts-" + std::to_string(rep) : "transcripts"))
                .string();
        forge::RunResult run = forge::run_pipeline(snippets, cfg, *backend,
                                                   validators.java.get(),
                                                   validators.python.get(), kb);
        std::string report = forge::render_run_report(run);
        fs::path report_path =
            fs::path(r.out_dir) /
            (r.repetitions > 1 ? "report-" + std::to_string(rep) + ".txt" : "report.txt");
        write_text(report_path, report);
        write_predictions(run, snippets,
                          fs::path(r.out_dir) /
                              (r.repetitions > 1 ? "predictions-" + std::to_string(rep)
                                                 : "predictions"));
        if (!run.per_library.empty()) summaries.push_back(run.summary);
        std::cout << "run " << rep << ": " << summary_line(run.summary) << '\n';
    }
    if (r.repetitions > 1 && !summaries.empty()) {
        forge::RunSummary median = forge::median_of_runs(summaries);
        std::cout << "median: " << summary_line(median) << '\n';
        write_text(fs::path(r.out_dir) / "median.txt", summary_line(median) + "\n");
    }
    return 0;
}

int cmd_kb_build(const std::vector<std::string>& archives, const std::string& dates_path,
                 const std::string& out_path, bool use_javap) {
    std::map<std::string, std::int64_t> dates;
    if (!dates_path.empty()) dates = forge::load_date_overrides(dates_path);
    forge::InverseIndex index;
    for (const auto& archive : archives) {
        std::string id = fs::path(archive).stem().string();
        std::optional<std::int64_t> override_date;
        if (auto it = dates.find(id); it != dates.end()) override_date = it->second;
        forge::IngestResult ingest =
            use_javap
                ? forge::ingest_archive_javap(archive, id,
                                              forge::find_executable("javap"), override_date)
                : forge::ingest_archive(archive, id, override_date);
        for (const auto& skip : ingest.skipped)
            std::cerr << "skipped " << skip << '\n';
        index.add(ingest);
    }
    index.save(out_path);
    std::cout << "indexed " << index.artifact_count() << " artifacts, " << index.fqn_count()
              << " classes, " << index.api_collision_count() << " colliding names -> "
              << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage synthesis of compilable code from incomplete snippets"};
    app.require_subcommand(1);
    CliOptions cli;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cli.config_path, "JSON config file");
        sub->add_option("--dataset", cli.dataset, "dataset root directory")->required();
        sub->add_option("--backend", cli.backend, "live|mock (default mock)");
        sub->add_option("--mock-transcript", cli.mock_transcript, "scripted responses (JSONL)");
        sub->add_option("--k", cli.k, "samples per vote");
        sub->add_option("--max-rounds", cli.max_rounds, "repair exchanges per snippet");
        sub->add_option("--repetitions", cli.repetitions, "independent runs (median reported)");
        sub->add_option("--parallelism", cli.parallelism, "worker threads");
        sub->add_option("--out", cli.out_dir, "output directory (default out)");
        sub->add_option("--kb-index", cli.kb_index, "class index for Java classpaths");
        sub->add_option("--python-env", cli.python_env, "Python environment or interpreter");
        sub->add_option("--py-checker", cli.py_checker, "static checker script");
        sub->add_option("--rules", cli.rules_path, "diagnostic categorization rules (JSON)");
    };

    auto* kb = app.add_subcommand("kb", "knowledge-base maintenance");
    kb->require_subcommand(1);
    auto* kb_build = kb->add_subcommand("build", "index class archives");
    std::vector<std::string> archives;
    std::string dates_path, kb_out = "kb-index.json";
    bool use_javap = false;
    kb_build->add_option("archives", archives, "class archives to ingest")->required();
    kb_build->add_option("--dates", dates_path, "artifact_id<TAB>ISO-date overrides");
    kb_build->add_option("--out", kb_out, "index output path");
    kb_build->add_flag("--use-javap", use_javap, "extract members via the disassembler");

    auto* infer = app.add_subcommand("infer", "import inference only");
    add_common(infer);
    infer->add_flag("--no-self-consistency", cli.no_self_consistency, "single sample (K=1)");

    auto* fix_cmd = app.add_subcommand("fix", "repair loop only");
    add_common(fix_cmd);
    fix_cmd->add_flag("--raw", cli.raw, "repair snippets without inferring imports first");

    auto* synth = app.add_subcommand("synthesize", "full two-stage pipeline");
    add_common(synth);

    auto* eval_cmd = app.add_subcommand("eval", "score stored predictions offline");
    std::string predictions_dir;
    eval_cmd->add_option("--dataset", cli.dataset, "dataset root directory")->required();
    eval_cmd->add_option("--predictions", predictions_dir, "directory of .imports files")
        ->required();
    eval_cmd->add_option("--out", cli.out_dir, "output directory (default out)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kb_build->parsed()) return cmd_kb_build(archives, dates_path, kb_out, use_javap);

        std::vector<forge::CodeSnippet> snippets = forge::load_dataset(cli.dataset);
        if (snippets.empty()) {
            std::cerr << "dataset is empty: " << cli.dataset << '\n';
            return 1;
        }

        if (eval_cmd->parsed()) {
            forge::Language lang = snippets.front().language;
            auto predictions = forge::load_import_lists(predictions_dir, lang);
            forge::RunResult run = forge::score_predictions(snippets, predictions);
            std::string report = forge::render_run_report(run);
            write_text(fs::path(cli.out_dir) / "report.txt", report);
            std::cout << summary_line(run.summary) << '\n';
            return 0;
        }

        Resolved r = resolve(cli);
        forge::PipelineConfig pipeline = r.pipeline;
        if (infer->parsed()) pipeline.skip_fixing = true;
        if (fix_cmd->parsed() && cli.raw) pipeline.skip_inference = true;
        return run_with_repetitions(r, snippets, pipeline);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const forge::ToolMissing& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const forge::EnvMissing& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const forge::DatasetError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}

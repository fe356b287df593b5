#include "forge/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace forge {

namespace {

std::string transcript_name(const std::string& snippet_id) {
    std::string name = snippet_id;
    for (char& c : name)
        if (c == '/' || c == '\\') c = '_';
    return name + ".txt";
}

void score_result(SnippetResult& result, const CodeSnippet& snippet,
                  const ImportSet& predicted, const InverseIndex* kb) {
    result.score.snippet_id = snippet.id;
    result.score.library_label = snippet.library_label;
    result.score.compiled = result.outcome.compiled;
    result.score.rounds_used = result.outcome.rounds_used;
    if (!snippet.ground_truth) return;
    result.has_truth = true;
    ImportCounts c = score_imports(predicted, *snippet.ground_truth);
    result.score.tp = c.tp;
    result.score.fp = c.fp;
    result.score.fn = c.fn;
    result.score.match = classify_match(predicted, *snippet.ground_truth);
    if (!result.outcome.compiled || result.score.match != MatchCategory::Same)
        result.failure = prelabel_failure(predicted, *snippet.ground_truth, kb,
                                          result.outcome.body_modified);
}

SnippetResult process_snippet(const CodeSnippet& snippet, const PipelineConfig& cfg,
                              Backend& backend, Validator& validator,
                              const InverseIndex* kb) {
    SnippetResult result;
    result.snippet_id = snippet.id;
    result.library_label = snippet.library_label;

    ImportSet inferred;
    if (!cfg.skip_inference) {
        result.inference = self_consistent_infer(snippet, cfg.infer, backend);
        inferred = result.inference.chosen;
    }

    if (cfg.skip_fixing) {
        result.outcome.final_code = render_imports(inferred, snippet.language) + snippet.body;
        score_result(result, snippet, inferred, kb);
        return result;
    }

    std::string candidate = render_imports(inferred, snippet.language) + snippet.body;
    result.outcome = fix(candidate, snippet, cfg.fix, backend, validator, kb);

    ImportSet predicted = strip_imports(result.outcome.final_code, snippet.language).removed;
    score_result(result, snippet, predicted, kb);

    if (!cfg.transcript_dir.empty()) {
        fs::create_directories(cfg.transcript_dir);
        write_transcript(result.outcome, snippet.id,
                         (fs::path(cfg.transcript_dir) / transcript_name(snippet.id)).string());
    }
    return result;
}

}  // namespace

void aggregate_run(RunResult& run) {
    std::map<std::string, std::vector<SnippetScore>> by_library;
    for (const auto& r : run.snippets)
        if (r.has_truth && r.error.empty()) by_library[r.library_label].push_back(r.score);
    run.per_library.clear();
    for (const auto& [label, scores] : by_library)
        run.per_library.push_back(aggregate_library(label, scores));
    if (!run.per_library.empty()) run.summary = summarize_run(run.per_library);
}

RunResult run_pipeline(const std::vector<CodeSnippet>& snippets, const PipelineConfig& cfg,
                       Backend& backend, Validator* java_validator,
                       Validator* python_validator, const InverseIndex* kb) {
    RunResult run;
    run.snippets.resize(snippets.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= snippets.size()) return;
            {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                if (fatal) return;
            }
            const CodeSnippet& snippet = snippets[i];
            Validator* validator =
                snippet.language == Language::Java ? java_validator : python_validator;
            try {
                if (!validator && !cfg.skip_fixing)
                    throw ToolMissing("no validator configured for " +
                                      to_string(snippet.language));
                run.snippets[i] =
                    process_snippet(snippet, cfg, backend, *validator, kb);
            } catch (const ToolMissing&) {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                return;
            } catch (const EnvMissing&) {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                if (!fatal) fatal = std::current_exception();
                return;
            } catch (const std::exception& e) {
                run.snippets[i].snippet_id = snippet.id;
                run.snippets[i].library_label = snippet.library_label;
                run.snippets[i].error = e.what();
            }
        }
    };

    int n_workers = std::max(1, cfg.parallelism);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    aggregate_run(run);
    return run;
}

RunResult score_predictions(const std::vector<CodeSnippet>& snippets,
                            const std::map<std::string, ImportSet>& predictions) {
    RunResult run;
    for (const auto& snippet : snippets) {
        SnippetResult result;
        result.snippet_id = snippet.id;
        result.library_label = snippet.library_label;
        auto it = predictions.find(snippet.id);
        ImportSet predicted = it == predictions.end() ? ImportSet{} : it->second;
        score_result(result, snippet, predicted, nullptr);
        run.snippets.push_back(std::move(result));
    }
    aggregate_run(run);
    return run;
}

std::string render_run_report(const RunResult& run) {
    std::ostringstream out;
    out << "# per-snippet results\n";
    out << "snippet\tcompiled\trounds\ttp\tfp\tfn\tmatch\terror\n";
    for (const auto& r : run.snippets) {
        out << r.snippet_id << '\t' << (r.outcome.compiled ? "yes" : "no") << '\t'
            << r.outcome.rounds_used << '\t' << r.score.tp << '\t' << r.score.fp << '\t'
            << r.score.fn << '\t' << (r.has_truth ? to_string(r.score.match) : "-") << '\t'
            << (r.error.empty() ? "-" : r.error) << '\n';
    }
    if (!run.per_library.empty()) {
        out << "\n# per-library metrics (micro within library; summary row macro-averages "
               "P/R/F1 and pools CR)\n";
        out << render_library_table(run.per_library, run.summary);
        out << "\n# match distribution\n";
        out << render_match_table(run.per_library, run.summary);
    }
    bool any_failure = false;
    for (const auto& r : run.snippets)
        if (r.has_truth && (!r.outcome.compiled || r.score.match != MatchCategory::Same))
            any_failure = true;
    if (any_failure) {
        out << "\n# failure worksheet (heuristic pre-labels; review and override)\n";
        out << "snippet\tcompiled\tmatch\tlabel\n";
        for (const auto& r : run.snippets) {
            if (!r.has_truth || (r.outcome.compiled && r.score.match == MatchCategory::Same))
                continue;
            out << r.snippet_id << '\t' << (r.outcome.compiled ? "yes" : "no") << '\t'
                << to_string(r.score.match) << '\t' << to_string(r.failure) << '\n';
        }
    }
    return out.str();
}

}  // namespace forge

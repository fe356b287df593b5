#pragma once

#include "forge/dataset.hpp"
#include "forge/eval.hpp"
#include "forge/fixing.hpp"
#include "forge/inference.hpp"

namespace forge {

struct PipelineConfig {
    InferenceConfig infer;
    FixConfig fix;
    int parallelism = 1;
    bool skip_inference = false;  // repair-only ablation: fix the raw snippet
    bool skip_fixing = false;     // inference-only: score the voted imports
    std::string transcript_dir;   // empty = no per-snippet transcripts
};

struct SnippetResult {
    std::string snippet_id;
    std::string library_label;
    bool has_truth = false;
    InferenceResult inference;
    FixOutcome outcome;
    SnippetScore score;
    FailureLabel failure = FailureLabel::Unlabeled;
    std::string error;  // non-fatal per-snippet failure; run continued
};

struct RunResult {
    std::vector<SnippetResult> snippets;
    std::vector<LibraryMetrics> per_library;  // only snippets with ground truth
    RunSummary summary;
};

/// Run the two-stage pipeline over every snippet with a worker pool of
/// cfg.parallelism threads. Per-snippet errors are recorded and the run
/// continues; missing tools/environments abort. `python_validator` may be
/// null for Java-only datasets and vice versa; `kb` may be null.
RunResult run_pipeline(const std::vector<CodeSnippet>& snippets, const PipelineConfig& cfg,
                       Backend& backend, Validator* java_validator,
                       Validator* python_validator, const InverseIndex* kb);

/// Score stored predictions against the dataset's ground truth without
/// any model calls. `compiled` is unknowable offline and reported false.
RunResult score_predictions(const std::vector<CodeSnippet>& snippets,
                            const std::map<std::string, ImportSet>& predictions);

/// Aggregate per-library metrics and the summary from raw results.
void aggregate_run(RunResult& run);

/// Full structured-text run report: per-snippet rows, per-library
/// tables, summary, and the failure worksheet for manual review.
std::string render_run_report(const RunResult& run);

}  // namespace forge

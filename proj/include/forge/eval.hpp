#pragma once

#include <map>
#include <string>
#include <vector>

#include "forge/imports.hpp"
#include "forge/kb.hpp"
#include "forge/validator.hpp"

namespace forge {

struct EmptyInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ImportCounts {
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

/// Canonical-form set comparison: tp=|pred∩truth|, fp=|pred\truth|,
/// fn=|truth\pred|.
ImportCounts score_imports(const ImportSet& pred, const ImportSet& truth);

struct SnippetScore {
    std::string snippet_id;
    std::string library_label;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    MatchCategory match = MatchCategory::Different;
    bool compiled = false;
    int rounds_used = 0;
};

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Zero-denominator conventions: P (or R) = 1 when its denominator is 0;
/// F1 = 0 when P + R = 0, else the harmonic mean.
PRF compute_prf(long tp, long fp, long fn);

struct LibraryMetrics {
    std::string library_label;
    long tp = 0, fp = 0, fn = 0;  // micro-summed within the library
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    int compiled_count = 0;
    int total_count = 0;
    std::map<MatchCategory, int> match_distribution;

    double compilation_rate() const {
        return total_count == 0 ? 0.0 : static_cast<double>(compiled_count) / total_count;
    }
};

/// Micro-aggregate one library: sum counts, then P/R/F1. Throws
/// EmptyInput on an empty score list.
LibraryMetrics aggregate_library(const std::string& library_label,
                                 const std::vector<SnippetScore>& scores);

struct RunSummary {
    double precision = 0.0, recall = 0.0, f1 = 0.0;  // unweighted library means
    int compiled_count = 0;
    int total_count = 0;
    double compilation_rate = 0.0;  // pooled, not averaged
    std::map<MatchCategory, int> match_distribution;  // pooled
};

/// Macro-average P/R/F1 across libraries; compilation rate and match
/// distribution pooled over all snippets. Throws EmptyInput.
RunSummary summarize_run(const std::vector<LibraryMetrics>& per_library);

struct TaxonomyEntry {
    std::string library_label;
    ValidationReport before;
    ValidationReport after;
};

struct TaxonomyRow {
    std::map<DiagnosticCategory, int> before;  // snippets with >=1 diagnostic
    std::map<DiagnosticCategory, int> after;
};

/// Per-library count of snippets exhibiting each diagnostic category,
/// before vs after repair. A snippet counts once per category.
std::map<std::string, TaxonomyRow> error_taxonomy_table(
    const std::vector<TaxonomyEntry>& entries);

/// Element-wise lower median across run summaries (deterministic for
/// even n). Throws EmptyInput.
RunSummary median_of_runs(const std::vector<RunSummary>& runs);

enum class FailureLabel {
    UnconstrainedClass,
    PartialInference,
    FakeInference,
    AlternativeInference,
    UnexpectedCodeModification,
    Unlabeled
};

std::string to_string(FailureLabel label);

/// Heuristic pre-label for the manual failure worksheet: code-body edits
/// and KB-absent predictions are detectable mechanically; partial
/// inference is flagged by package-prefix overlap with the ground truth.
/// Everything else stays Unlabeled for the reviewer.
FailureLabel prelabel_failure(const ImportSet& pred, const ImportSet& truth,
                              const InverseIndex* kb, bool body_modified);

/// TSV renderings matching the published table layouts, for diffing.
std::string render_library_table(const std::vector<LibraryMetrics>& per_library,
                                 const RunSummary& summary);
std::string render_match_table(const std::vector<LibraryMetrics>& per_library,
                               const RunSummary& summary);
std::string render_taxonomy_table(const std::map<std::string, TaxonomyRow>& table);

}  // namespace forge

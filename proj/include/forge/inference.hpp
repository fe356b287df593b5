#pragma once

#include "forge/imports.hpp"
#include "forge/llm.hpp"

namespace forge {

struct InferenceConfig {
    int k_samples = 10;
    double temperature = 1.0;
    int max_tiebreak_rounds = 5;
    int max_output_tokens = 256;
    std::string model_id;
};

struct InferenceResult {
    ImportSet chosen;
    std::vector<ImportSet> samples;  // every vote across all rounds
    int vote_count = 0;
    int rounds_used = 0;
};

/// Instantiate the import-inference prompt for one snippet (single user
/// message: presentation guide, language-specific instruction, body).
CompletionRequest build_prompt_1(const CodeSnippet& snippet, const InferenceConfig& cfg);

struct VoteOutcome {
    ImportSet winner;
    int votes = 0;
    bool tied = false;
};

/// Frequency-majority vote over sampled import sets. Set identity is
/// order-insensitive canonical equality. Reports a tie when several sets
/// share the maximal count; `winner` is then the tied set with the
/// lexicographically smallest serialization.
VoteOutcome majority_vote(const std::vector<ImportSet>& samples);

/// Sample K completions and vote; on a tie, re-sample a fresh batch of K
/// up to max_tiebreak_rounds, then fall back deterministically to the
/// smallest serialization among the tied maxima.
InferenceResult self_consistent_infer(const CodeSnippet& snippet, const InferenceConfig& cfg,
                                      Backend& backend);

}  // namespace forge

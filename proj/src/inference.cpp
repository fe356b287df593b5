#include "forge/inference.hpp"

#include <map>

namespace forge {

namespace prompts {

const char* kPresentationGuide = "Reply with to-the-point answer, no elaboration.";

const char* kInferJava =
    "Do not check for any import statements in the code. Only give correct imports by not "
    "using wildcard imports. Please note that you need to pay close attention and your "
    "response should be specific and accurate. Avoid repetition and must not generate wrong "
    "and nonexistent imports:";

const char* kInferPython =
    "Only give correct import statements for the attached code. Please note that you need to "
    "pay close attention and your response should be specific and accurate. Avoid repetition "
    "and must not generate wrong imports:";

}  // namespace prompts

CompletionRequest build_prompt_1(const CodeSnippet& snippet, const InferenceConfig& cfg) {
    const char* instruction =
        snippet.language == Language::Java ? prompts::kInferJava : prompts::kInferPython;
    CompletionRequest req;
    req.temperature = cfg.temperature;
    req.max_output_tokens = cfg.max_output_tokens;
    req.model_id = cfg.model_id;
    req.tag = {"infer", snippet.id, 1};
    std::string content = std::string(prompts::kPresentationGuide) + "\n\n" + instruction +
                          "\n\n" + snippet.body;
    req.messages.push_back({Role::User, content});
    return req;
}

VoteOutcome majority_vote(const std::vector<ImportSet>& samples) {
    std::map<std::string, std::pair<int, ImportSet>> counts;
    for (const auto& s : samples) {
        auto [it, inserted] = counts.emplace(s.serialize(), std::make_pair(0, s));
        it->second.first += 1;
    }
    VoteOutcome out;
    int best = 0;
    int n_best = 0;
    for (const auto& [key, entry] : counts) {
        if (entry.first > best) {
            best = entry.first;
            n_best = 1;
            out.winner = entry.second;
            out.votes = best;
        } else if (entry.first == best) {
            n_best += 1;
            // std::map iterates keys in order, so the first maximal entry
            // already is the lexicographically smallest serialization.
        }
    }
    out.tied = n_best > 1;
    return out;
}

InferenceResult self_consistent_infer(const CodeSnippet& snippet, const InferenceConfig& cfg,
                                      Backend& backend) {
    InferenceResult result;
    CompletionRequest req = build_prompt_1(snippet, cfg);

    for (int round = 1; round <= cfg.max_tiebreak_rounds; ++round) {
        std::vector<ImportSet> batch;
        batch.reserve(cfg.k_samples);
        for (int i = 0; i < cfg.k_samples; ++i) {
            req.tag.attempt = (round - 1) * cfg.k_samples + i + 1;
            CompletionResponse resp = backend.complete(req);
            batch.push_back(extract_import_statements(resp.text, snippet.language));
        }
        result.samples.insert(result.samples.end(), batch.begin(), batch.end());
        result.rounds_used = round;

        VoteOutcome vote = majority_vote(batch);
        if (!vote.tied || round == cfg.max_tiebreak_rounds) {
            result.chosen = vote.winner;
            result.vote_count = vote.votes;
            return result;
        }
        // Tie: discard the counts and sample a fresh batch.
    }
    return result;  // unreachable; loop always returns
}

}  // namespace forge

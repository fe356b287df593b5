#pragma once

#include "forge/kb.hpp"
#include "forge/llm.hpp"
#include "forge/validator.hpp"

namespace forge {

enum class GuardMode { Warn, Reject };

std::string to_string(GuardMode m);

struct FixConfig {
    int max_rounds = 5;            // M: validator<->model exchanges
    double temperature = 0.5;
    int max_output_tokens = 1024;  // replies carry full code
    int history_token_budget = 3000;
    GuardMode guard_mode = GuardMode::Warn;
    std::string model_id;
};

struct ConversationState {
    std::vector<ChatMessage> history;  // truncated oldest-first to budget
    int attempt_number = 1;
    std::string last_code;   // most recent model revision, verbatim
    std::string last_error;  // error log that revision produced
};

struct RoundRecord {
    std::string prompt;        // flattened message sent this round
    std::string response;      // raw model text
    ValidationReport report;   // the failure that triggered the round
    bool candidate_rejected = false;  // guard discarded the revision
};

struct FixOutcome {
    std::string final_code;
    bool compiled = false;
    int rounds_used = 0;  // backend exchanges; 0 = input validated immediately
    std::vector<RoundRecord> per_round;
    ValidationReport final_report;  // verdict on final_code
    bool body_modified = false;     // final_code body differs from the input body
};

/// First-attempt repair prompt: presentation guide, the candidate code,
/// its error log, then the language-specific fixing instruction.
CompletionRequest build_prompt_2_first(const std::string& code, const std::string& error_log,
                                       Language lang, const FixConfig& cfg,
                                       const std::string& snippet_id);

/// Follow-up prompt (attempt >= 2): truncated chat history as context,
/// then the model's last revision, the attempt-number sentence, the new
/// error log, and the fixing instruction. Throws std::logic_error when
/// attempt_number < 2.
CompletionRequest build_prompt_2_followup(const ConversationState& state, Language lang,
                                          const FixConfig& cfg, const std::string& snippet_id);

/// Drop oldest messages until the chars/4 token estimate fits the budget
/// minus a 10% safety margin. Newest messages survive longest.
void truncate_history(std::vector<ChatMessage>& history, int token_budget);

/// True iff the candidate's non-import, whitespace-normalized line
/// sequence differs from the original body's.
bool detect_body_modification(const std::string& original_body, const std::string& candidate,
                              Language lang);

/// Bounded repair loop: validate the current code; on failure hand the
/// error log to the backend and adopt its revision, up to cfg.max_rounds
/// exchanges. The returned code is always re-validated so `compiled`
/// describes `final_code` itself. `kb` may be null (no classpath
/// resolution; Python runs never use one).
FixOutcome fix(const std::string& code_with_imports, const CodeSnippet& snippet,
               const FixConfig& cfg, Backend& backend, Validator& validator,
               const InverseIndex* kb);

/// Human-readable conversation dump (prompts, responses, validation
/// verdicts) for offline failure analysis.
void write_transcript(const FixOutcome& outcome, const std::string& snippet_id,
                      const std::string& path);

}  // namespace forge

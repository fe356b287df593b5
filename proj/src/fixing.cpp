#include "forge/fixing.hpp"

#include <fstream>
#include <sstream>

namespace forge {

namespace prompts {

extern const char* kPresentationGuide;

const char* kFixJava =
    "Now fix the error by focusing on fixing the import statements by not using wildcard "
    "imports and must not modify code body which means do not change anything inside the "
    "class. So, it can be successfully compiled and reply with full code.";

const char* kFixPython =
    "Now fix the error by focusing on fixing the import statements. So, it can be run "
    "successfully and reply with full code.";

}  // namespace prompts

namespace {

const char* fix_instruction(Language lang) {
    return lang == Language::Java ? prompts::kFixJava : prompts::kFixPython;
}

std::int64_t estimate_tokens(const std::string& text) {
    return static_cast<std::int64_t>(text.size()) / 4 + 1;
}

std::string error_log_of(const ValidationReport& report) {
    if (!report.raw_log.empty()) return report.raw_log;
    std::string out;
    for (const auto& d : report.diagnostics) {
        if (!out.empty()) out += '\n';
        out += d.message;
    }
    return out;
}

std::string flatten(const std::vector<ChatMessage>& messages) {
    std::string out;
    for (const auto& m : messages) {
        if (!out.empty()) out += "\n\n";
        out += "[" + to_string(m.role) + "] " + m.content;
    }
    return out;
}

std::string normalize_line(const std::string& line) {
    std::string out;
    bool in_space = true;  // also trims leading whitespace
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> normalized_body_lines(const std::string& code, Language lang) {
    std::vector<std::string> lines;
    std::istringstream in(strip_imports(code, lang).body);
    std::string line;
    while (std::getline(in, line)) {
        std::string norm = normalize_line(line);
        if (!norm.empty()) lines.push_back(std::move(norm));
    }
    return lines;
}

}  // namespace

std::string to_string(GuardMode m) {
    return m == GuardMode::Warn ? "warn" : "reject";
}

void truncate_history(std::vector<ChatMessage>& history, int token_budget) {
    std::int64_t effective = token_budget - token_budget / 10;
    std::int64_t total = 0;
    for (const auto& m : history) total += estimate_tokens(m.content);
    std::size_t drop = 0;
    while (total > effective && drop < history.size()) {
        total -= estimate_tokens(history[drop].content);
        ++drop;
    }
    if (drop > 0) history.erase(history.begin(), history.begin() + drop);
}

CompletionRequest build_prompt_2_first(const std::string& code, const std::string& error_log,
                                       Language lang, const FixConfig& cfg,
                                       const std::string& snippet_id) {
    CompletionRequest req;
    req.temperature = cfg.temperature;
    req.max_output_tokens = cfg.max_output_tokens;
    req.model_id = cfg.model_id;
    req.tag = {"fix", snippet_id, 1};
    std::string content = std::string(prompts::kPresentationGuide) +
                          "\nSee the code below:\n" + code +
                          "\nFor the above code I got the below error log:\n" + error_log +
                          "\n" + fix_instruction(lang);
    req.messages.push_back({Role::User, content});
    return req;
}

CompletionRequest build_prompt_2_followup(const ConversationState& state, Language lang,
                                          const FixConfig& cfg,
                                          const std::string& snippet_id) {
    if (state.attempt_number < 2)
        throw std::logic_error("follow-up prompt requires attempt_number >= 2");
    CompletionRequest req;
    req.temperature = cfg.temperature;
    req.max_output_tokens = cfg.max_output_tokens;
    req.model_id = cfg.model_id;
    req.tag = {"fix", snippet_id, state.attempt_number};
    req.messages = state.history;
    truncate_history(req.messages, cfg.history_token_budget);
    std::string content = state.last_code + "\nYou gave the above imports fix in your attempt " +
                          std::to_string(state.attempt_number) +
                          ". But compiler gave this error:\n" + state.last_error + "\n" +
                          fix_instruction(lang);
    req.messages.push_back({Role::User, content});
    return req;
}

bool detect_body_modification(const std::string& original_body, const std::string& candidate,
                              Language lang) {
    return normalized_body_lines(original_body, lang) !=
           normalized_body_lines(candidate, lang);
}

FixOutcome fix(const std::string& code_with_imports, const CodeSnippet& snippet,
               const FixConfig& cfg, Backend& backend, Validator& validator,
               const InverseIndex* kb) {
    FixOutcome outcome;
    std::string current = code_with_imports;
    ConversationState state;

    auto validate_current = [&]() {
        std::vector<std::string> classpath;
        if (snippet.language == Language::Java && kb) {
            StripResult stripped = strip_imports(current, Language::Java);
            classpath = kb->assemble_classpath(stripped.removed).paths;
        }
        return validator.validate(current, classpath);
    };

    for (int exchange = 1; exchange <= cfg.max_rounds; ++exchange) {
        ValidationReport report = validate_current();
        if (report.success) {
            outcome.final_code = current;
            outcome.compiled = true;
            outcome.rounds_used = exchange - 1;
            outcome.final_report = std::move(report);
            outcome.body_modified =
                detect_body_modification(snippet.body, outcome.final_code, snippet.language);
            return outcome;
        }

        std::string error_log = error_log_of(report);
        CompletionRequest req =
            state.attempt_number == 1
                ? build_prompt_2_first(current, error_log, snippet.language, cfg, snippet.id)
                : build_prompt_2_followup(state, snippet.language, cfg, snippet.id);

        CompletionResponse resp = backend.complete(req);
        outcome.rounds_used = exchange;

        RoundRecord record;
        record.prompt = flatten(req.messages);
        record.response = resp.text;
        record.report = std::move(report);

        std::string candidate;
        bool usable = true;
        try {
            candidate = extract_code_block(resp.text, snippet.language);
        } catch (const NoCodeFound&) {
            usable = false;  // keep the prior code; the round still counts
        }
        if (usable && cfg.guard_mode == GuardMode::Reject &&
            detect_body_modification(snippet.body, candidate, snippet.language)) {
            record.candidate_rejected = true;
            usable = false;
        }
        if (usable) current = candidate;

        state.history = req.messages;
        state.history.push_back({Role::Assistant, resp.text});
        truncate_history(state.history, cfg.history_token_budget);
        state.last_code = candidate.empty() ? resp.text : candidate;
        state.last_error = error_log;
        state.attempt_number += 1;

        outcome.per_round.push_back(std::move(record));
    }

    // Exhausted: the verdict must describe the code actually returned.
    outcome.final_code = current;
    outcome.final_report = validate_current();
    outcome.compiled = outcome.final_report.success;
    outcome.body_modified =
        detect_body_modification(snippet.body, outcome.final_code, snippet.language);
    return outcome;
}

void write_transcript(const FixOutcome& outcome, const std::string& snippet_id,
                      const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write transcript: " + path);
    out << "snippet: " << snippet_id << '\n'
        << "compiled: " << (outcome.compiled ? "true" : "false") << '\n'
        << "rounds_used: " << outcome.rounds_used << '\n'
        << "body_modified: " << (outcome.body_modified ? "true" : "false") << '\n';
    int n = 0;
    for (const auto& round : outcome.per_round) {
        out << "\n=== round " << ++n << " ===\n"
            << "--- validation log ---\n"
            << round.report.raw_log << '\n'
            << "--- prompt ---\n"
            << round.prompt << '\n'
            << "--- response ---\n"
            << round.response << '\n';
        if (round.candidate_rejected) out << "--- candidate rejected (body modified) ---\n";
    }
    out << "\n=== final code ===\n" << outcome.final_code << '\n'
        << "=== final validation log ===\n" << outcome.final_report.raw_log << '\n';
}

}  // namespace forge

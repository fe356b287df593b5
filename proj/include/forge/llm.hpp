#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forge/imports.hpp"

namespace forge {

enum class Role { System, User, Assistant };

std::string to_string(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

/// Metadata the pipeline attaches to each request so the mock backend can
/// match scripted responses without depending on exact prompt text.
struct RequestTag {
    std::string kind;        // "infer" | "fix"
    std::string snippet_id;
    int attempt = 1;
};

struct CompletionRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.5;
    int max_output_tokens = 256;
    std::string model_id;
    RequestTag tag;
};

struct CompletionResponse {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t output_tokens = 0;
    std::chrono::milliseconds latency{0};
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TranscriptExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoCodeFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-1K-token prices keyed by model id; mirrors the accounting used in
/// the usage ledger.
struct PriceTable {
    struct Price {
        double prompt_per_1k = 0.0;
        double output_per_1k = 0.0;
    };
    std::map<std::string, Price> models;

    double cost(const std::string& model, std::int64_t prompt_tokens,
                std::int64_t output_tokens) const;
};

struct UsageTotals {
    std::int64_t calls = 0;
    std::int64_t prompt_tokens = 0;
    std::int64_t output_tokens = 0;
    double cost = 0.0;
};

/// Appends one row per completed call (TSV: timestamp, model,
/// prompt_tokens, output_tokens, cost) and keeps running totals.
class UsageLedger {
public:
    UsageLedger() = default;
    explicit UsageLedger(std::string path) : path_(std::move(path)) {}

    void record(const std::string& model, std::int64_t prompt_tokens,
                std::int64_t output_tokens, double cost);
    UsageTotals totals() const;

private:
    mutable std::mutex mutex_;
    std::string path_;
    UsageTotals totals_;
};

class Backend {
public:
    virtual ~Backend() = default;

    /// Issue one chat completion. Throws TransportError (after retries),
    /// BudgetExceeded, or TranscriptExhausted (mock).
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;

    /// Number of successful completions served so far.
    virtual std::int64_t call_count() const = 0;
};

/// One scripted mock record. Matches on (kind, snippet_id, attempt);
/// attempt 0 matches any attempt. `repeat` < 0 means unlimited replays.
struct TranscriptRecord {
    std::string kind;
    std::string snippet_id;
    int attempt = 0;
    int repeat = 1;
    std::string response;
};

/// Deterministic scripted backend: identical request sequences yield
/// bit-identical responses.
class MockBackend : public Backend {
public:
    explicit MockBackend(std::vector<TranscriptRecord> records);
    MockBackend(MockBackend&& other) noexcept
        : slots_(std::move(other.slots_)), calls_(other.calls_) {}

    /// Loads line-delimited JSON records ({"kind","snippet","attempt",
    /// "repeat","response"}).
    static MockBackend from_file(const std::string& path);

    CompletionResponse complete(const CompletionRequest& request) override;
    std::int64_t call_count() const override { return calls_; }

private:
    struct Slot {
        TranscriptRecord record;
        int used = 0;
    };
    mutable std::mutex mutex_;
    std::vector<Slot> slots_;
    std::int64_t calls_ = 0;
};

struct LiveBackendConfig {
    std::string endpoint = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key;          // normally taken from the environment
    std::string model_id = "gpt-3.5-turbo-0125";
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{500};
    double cost_ceiling = -1.0;   // < 0 disables the ceiling; 0 blocks all calls
    PriceTable prices;
};

/// HTTPS chat-completions client with bounded exponential backoff.
class LiveBackend : public Backend {
public:
    LiveBackend(LiveBackendConfig config, std::shared_ptr<UsageLedger> ledger);

    CompletionResponse complete(const CompletionRequest& request) override;
    std::int64_t call_count() const override { return calls_; }

private:
    LiveBackendConfig config_;
    std::shared_ptr<UsageLedger> ledger_;
    std::mutex mutex_;
    std::int64_t calls_ = 0;
};

/// Pull import declarations out of free-form model output. Recognizes
/// plain declarations, prose lists after a colon, and negative responses
/// ("does not require any additional import statements") which yield the
/// empty set. Unparseable text also yields the empty set.
ImportSet extract_import_statements(const std::string& text, Language lang);

/// Return the largest fenced code block, or the input with surrounding
/// prose lines removed when no fences are present. Throws NoCodeFound if
/// nothing code-like remains.
std::string extract_code_block(const std::string& text, Language lang);

}  // namespace forge

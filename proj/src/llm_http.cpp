#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "forge/llm.hpp"

namespace forge {

namespace {

struct Endpoint {
    bool https = true;
    std::string host;
    int port = 443;
};

Endpoint parse_endpoint(const std::string& url) {
    Endpoint ep;
    std::string rest = url;
    if (rest.rfind("https://", 0) == 0) {
        rest = rest.substr(8);
    } else if (rest.rfind("http://", 0) == 0) {
        ep.https = false;
        ep.port = 80;
        rest = rest.substr(7);
    }
    auto slash = rest.find('/');
    if (slash != std::string::npos) rest = rest.substr(0, slash);
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
        ep.host = rest.substr(0, colon);
        ep.port = std::stoi(rest.substr(colon + 1));
    } else {
        ep.host = rest;
    }
    return ep;
}

bool retryable_status(int status) {
    return status == 429 || status >= 500;
}

}  // namespace

LiveBackend::LiveBackend(LiveBackendConfig config, std::shared_ptr<UsageLedger> ledger)
    : config_(std::move(config)), ledger_(std::move(ledger)) {
    if (!ledger_) ledger_ = std::make_shared<UsageLedger>();
}

CompletionResponse LiveBackend::complete(const CompletionRequest& request) {
    // One request in flight per backend; live APIs throttle anyway.
    std::lock_guard lock(mutex_);

    if (config_.cost_ceiling >= 0.0 && ledger_->totals().cost >= config_.cost_ceiling) {
        throw BudgetExceeded("cost ceiling reached: " + std::to_string(config_.cost_ceiling));
    }

    nlohmann::json body;
    body["model"] = request.model_id.empty() ? config_.model_id : request.model_id;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) {
        body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    const std::string payload = body.dump();

    Endpoint ep = parse_endpoint(config_.endpoint);
    auto backoff = config_.initial_backoff;
    std::string last_error;

    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto started = std::chrono::steady_clock::now();

        httplib::Result res;
        httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
        if (ep.https) {
            httplib::SSLClient client(ep.host, ep.port);
            client.set_connection_timeout(10);
            client.set_read_timeout(120);
            res = client.Post(config_.path, headers, payload, "application/json");
        } else {
            httplib::Client client(ep.host, ep.port);
            client.set_connection_timeout(10);
            client.set_read_timeout(120);
            res = client.Post(config_.path, headers, payload, "application/json");
        }

        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (retryable_status(res->status)) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body);
        }

        nlohmann::json reply = nlohmann::json::parse(res->body);
        CompletionResponse out;
        out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        if (reply.contains("usage")) {
            out.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
            out.output_tokens = reply["usage"].value("completion_tokens", 0);
        }
        out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        calls_ += 1;
        ledger_->record(body["model"].get<std::string>(), out.prompt_tokens, out.output_tokens,
                        config_.prices.cost(body["model"].get<std::string>(), out.prompt_tokens,
                                            out.output_tokens));
        return out;
    }
    throw TransportError("exhausted " + std::to_string(config_.max_attempts) +
                         " attempts: " + last_error);
}

}  // namespace forge

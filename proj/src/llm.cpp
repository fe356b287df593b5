#include "forge/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace forge {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

// Rough token estimate used by the mock backend and history budgeting.
std::int64_t estimate_tokens(const std::string& s) {
    return static_cast<std::int64_t>(s.size() / 4) + 1;
}

bool looks_like_qualified_name(const std::string& s) {
    if (s.empty()) return false;
    bool seg_start = true;
    for (char c : s) {
        if (c == '.') {
            if (seg_start) return false;
            seg_start = true;
        } else if (seg_start) {
            if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return false;
            seg_start = false;
        } else if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) {
            return false;
        }
    }
    return !seg_start;
}

std::string strip_decoration(const std::string& line) {
    std::string s = trim(line);
    for (const char* bullet : {"- ", "* ", "+ "}) {
        if (s.rfind(bullet, 0) == 0) {
            s = trim(s.substr(2));
            break;
        }
    }
    // numbered list "1. " / "2) "
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) s = trim(s.substr(i + 1));
    while (!s.empty() && s.front() == '`') s.erase(s.begin());
    while (!s.empty() && s.back() == '`') s.pop_back();
    return trim(s);
}

bool is_negative_response(const std::string& text) {
    std::string t = lower(text);
    if (t.find("import") == std::string::npos) return false;
    for (const char* phrase :
         {"does not require any", "does not need any", "no additional import",
          "no import statements are", "no imports are"}) {
        if (t.find(phrase) != std::string::npos) return true;
    }
    return false;
}

void collect_prose_names(const std::string& chunk, Language lang, ImportSet& out) {
    std::string item;
    auto flush = [&] {
        std::string name = trim(item);
        item.clear();
        while (!name.empty() && (name.back() == '.' || name.back() == ';')) name.pop_back();
        name = strip_decoration(name);
        if (!looks_like_qualified_name(name)) return;
        ImportStatement st;
        st.raw = name;
        st.fqn = name;
        out.insert(st);
    };
    for (char c : chunk) {
        if (c == ';' || c == ',' || c == '\n') {
            flush();
        } else {
            item += c;
        }
    }
    flush();
    (void)lang;
}

}  // namespace

std::string to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "?";
}

double PriceTable::cost(const std::string& model, std::int64_t prompt_tokens,
                        std::int64_t output_tokens) const {
    auto it = models.find(model);
    if (it == models.end()) return 0.0;
    return it->second.prompt_per_1k * static_cast<double>(prompt_tokens) / 1000.0 +
           it->second.output_per_1k * static_cast<double>(output_tokens) / 1000.0;
}

void UsageLedger::record(const std::string& model, std::int64_t prompt_tokens,
                         std::int64_t output_tokens, double cost) {
    std::lock_guard lock(mutex_);
    totals_.calls += 1;
    totals_.prompt_tokens += prompt_tokens;
    totals_.output_tokens += output_tokens;
    totals_.cost += cost;
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        auto now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
        out << now << '\t' << model << '\t' << prompt_tokens << '\t' << output_tokens
            << '\t' << cost << '\n';
    }
}

UsageTotals UsageLedger::totals() const {
    std::lock_guard lock(mutex_);
    return totals_;
}

MockBackend::MockBackend(std::vector<TranscriptRecord> records) {
    for (auto& r : records) slots_.push_back({std::move(r), 0});
}

MockBackend MockBackend::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transcript: " + path);
    std::vector<TranscriptRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        TranscriptRecord r;
        r.kind = j.value("kind", "");
        r.snippet_id = j.value("snippet", "");
        r.attempt = j.value("attempt", 0);
        r.repeat = j.value("repeat", 1);
        r.response = j.at("response").get<std::string>();
        records.push_back(std::move(r));
    }
    return MockBackend(std::move(records));
}

CompletionResponse MockBackend::complete(const CompletionRequest& request) {
    std::lock_guard lock(mutex_);
    for (auto& slot : slots_) {
        const auto& r = slot.record;
        if (r.repeat >= 0 && slot.used >= r.repeat) continue;
        if (!r.kind.empty() && r.kind != request.tag.kind) continue;
        if (!r.snippet_id.empty() && r.snippet_id != request.tag.snippet_id) continue;
        if (r.attempt != 0 && r.attempt != request.tag.attempt) continue;
        slot.used += 1;
        calls_ += 1;
        CompletionResponse resp;
        resp.text = r.response;
        for (const auto& m : request.messages) resp.prompt_tokens += estimate_tokens(m.content);
        resp.output_tokens = estimate_tokens(r.response);
        return resp;
    }
    throw TranscriptExhausted("no scripted response for kind=" + request.tag.kind +
                              " snippet=" + request.tag.snippet_id +
                              " attempt=" + std::to_string(request.tag.attempt));
}

ImportSet extract_import_statements(const std::string& text, Language lang) {
    ImportSet out;
    auto lines = lines_of(text);

    bool in_fence = false;
    for (const auto& raw_line : lines) {
        std::string t = trim(raw_line);
        if (t.rfind("```", 0) == 0) {
            in_fence = !in_fence;
            continue;
        }
        std::string candidate = strip_decoration(raw_line);
        for (const auto& st : parse_import_line(candidate, lang)) out.insert(st);
    }
    if (!out.empty()) return out;

    if (is_negative_response(text)) return out;

    // Prose list: qualified names after a colon on a line mentioning imports.
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string low = lower(lines[i]);
        std::size_t colon = lines[i].find(':');
        if (colon == std::string::npos) continue;
        if (low.substr(0, colon).find("import") == std::string::npos) continue;
        std::string chunk = lines[i].substr(colon + 1);
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            std::string follow = strip_decoration(lines[j]);
            while (!follow.empty() && (follow.back() == ';' || follow.back() == ',')) follow.pop_back();
            if (!looks_like_qualified_name(follow)) break;
            chunk += '\n' + follow;
        }
        collect_prose_names(chunk, lang, out);
        if (!out.empty()) break;
    }
    return out;
}

std::string extract_code_block(const std::string& text, Language lang) {
    (void)lang;
    auto lines = lines_of(text);

    std::vector<std::string> blocks;
    std::string current;
    bool in_fence = false;
    for (const auto& line : lines) {
        if (trim(line).rfind("```", 0) == 0) {
            if (in_fence) {
                blocks.push_back(current);
                current.clear();
            }
            in_fence = !in_fence;
            continue;
        }
        if (in_fence) {
            current += line;
            current += '\n';
        }
    }
    if (in_fence && !current.empty()) blocks.push_back(current);

    if (!blocks.empty()) {
        auto it = std::max_element(blocks.begin(), blocks.end(),
                                   [](const std::string& a, const std::string& b) {
                                       return a.size() < b.size();
                                   });
        std::string block = *it;
        while (!block.empty() && (block.back() == '\n' || block.back() == '\r')) block.pop_back();
        if (trim(block).empty()) throw NoCodeFound("fenced block is empty");
        return block;
    }

    // No fences: drop lines that read as prose.
    std::string result;
    bool any = false;
    for (const auto& line : lines) {
        std::string t = trim(line);
        bool prose = false;
        if (!t.empty() && (t.back() == '.' || t.back() == '!' || t.back() == '?') &&
            t.find(' ') != std::string::npos &&
            t.find_first_of(";{}()=<>[]") == std::string::npos) {
            prose = true;
        }
        if (prose) continue;
        if (!t.empty()) any = true;
        result += line;
        result += '\n';
    }
    while (!result.empty() && result.back() == '\n') result.pop_back();
    if (!any) throw NoCodeFound("no code content in model output");
    return result;
}

}  // namespace forge

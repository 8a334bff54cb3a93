#include "gamegrammar/generation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gg::generation {

// ---------------------------------------------------------------------------
// Prompt rendering
// ---------------------------------------------------------------------------

std::string render_field_catalog(const FieldCatalog& catalog) {
    std::string out = "Output fields (one JSON object):\n";
    for (const auto& field : catalog.fields) {
        out += "- " + field.field_path;
        out += field.required ? " (required)" : " (optional)";
        out += ": " + field.description;
        if (!field.type_hint.empty()) out += " [" + field.type_hint + "]";
        if (!field.allowed_values.empty()) {
            out += " Allowed values: ";
            for (std::size_t i = 0; i < field.allowed_values.size(); ++i) {
                if (i > 0) out += ", ";
                out += field.allowed_values[i];
            }
            out += ".";
        }
        if (field.min_length && *field.min_length > 0) {
            out += " Minimum length " + std::to_string(*field.min_length) + " characters.";
        }
        out += "\n";
    }
    return out;
}

std::string render_prompt(const Signature& sig) {
    std::string out = sig.persona;
    out += "\n\nInputs:\n";
    for (const auto& input : sig.inputs) {
        out += "- " + input.name + " (" + input.description + "): " + input.value + "\n";
    }
    out += "\n";
    out += render_field_catalog(sig.output_catalog);
    out += "\n";
    if (sig.reasoning_mode == ReasoningMode::chain_of_thought) {
        out +=
            "Reason step by step about the design choices first. After your "
            "reasoning, emit the final answer.\n";
    }
    out +=
        "Respond with exactly one JSON object inside a fenced code block:\n"
        "```json\n{ ... }\n```\n";
    return out;
}

// ---------------------------------------------------------------------------
// Structured extraction
// ---------------------------------------------------------------------------

namespace {

// Finds the matching close brace for the object starting at `start`,
// honoring string literals and escapes. Returns npos when unbalanced.
std::size_t matching_brace(const std::string& text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            --depth;
            if (depth == 0) return i;
        }
    }
    return std::string::npos;
}

std::optional<std::string> first_balanced_object(const std::string& text) {
    for (std::size_t pos = text.find('{'); pos != std::string::npos;
         pos = text.find('{', pos + 1)) {
        const std::size_t end = matching_brace(text, pos);
        if (end == std::string::npos) continue;
        std::string candidate = text.substr(pos, end - pos + 1);
        const Json parsed = Json::parse(candidate, nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return candidate;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> extract_structured(const std::string& response) {
    std::size_t pos = 0;
    while ((pos = response.find("```", pos)) != std::string::npos) {
        std::size_t content_start = response.find('\n', pos + 3);
        if (content_start == std::string::npos) break;
        ++content_start;
        const std::size_t fence_end = response.find("```", content_start);
        if (fence_end == std::string::npos) break;
        std::string content = response.substr(content_start, fence_end - content_start);
        const Json parsed = Json::parse(content, nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) {
            const auto begin = content.find_first_not_of(" \t\r\n");
            const auto end = content.find_last_not_of(" \t\r\n");
            return content.substr(begin, end - begin + 1);
        }
        pos = fence_end + 3;
    }
    return first_balanced_object(response);
}

// ---------------------------------------------------------------------------
// MockTransport
// ---------------------------------------------------------------------------

bool MockTransport::load_script_text(const std::string& jsonl_text, std::string* error) {
    std::vector<ScriptLine> lines;
    std::istringstream stream(jsonl_text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto begin = line.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) continue;
        Json doc = Json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("content") ||
            !doc["content"].is_string()) {
            if (error) {
                *error = "script line " + std::to_string(line_number) +
                         ": expected an object with a string \"content\"";
            }
            return false;
        }
        ScriptLine entry;
        entry.content = doc["content"].get<std::string>();
        if (doc.contains("route") && doc["route"].is_string()) {
            entry.route = doc["route"].get<std::string>();
        }
        if (doc.contains("prompt_tokens") && doc["prompt_tokens"].is_number_integer()) {
            entry.prompt_tokens = doc["prompt_tokens"].get<int>();
        }
        if (doc.contains("completion_tokens") && doc["completion_tokens"].is_number_integer()) {
            entry.completion_tokens = doc["completion_tokens"].get<int>();
        }
        lines.push_back(std::move(entry));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& entry : lines) script_.push_back(std::move(entry));
    return true;
}

bool MockTransport::load_script_file(const std::string& path, std::string* error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (error) *error = "cannot open " + path;
        return false;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_script_text(buffer.str(), error);
}

void MockTransport::push_response(const std::string& content, std::string route) {
    std::lock_guard<std::mutex> lock(mutex_);
    ScriptLine entry;
    entry.content = content;
    entry.route = std::move(route);
    script_.push_back(std::move(entry));
}

ChatResult MockTransport::complete(const ProviderConfig& cfg,
                                   const std::vector<ChatMessage>& messages) {
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back(messages);

    std::string flattened;
    std::size_t request_chars = 0;
    for (const auto& message : messages) {
        flattened += message.content;
        flattened += "\n";
        request_chars += message.content.size();
    }

    ScriptLine* chosen = nullptr;
    for (auto& entry : script_) {
        if (entry.used) continue;
        if (entry.route.empty()) {
            if (!chosen) chosen = &entry;  // shared queue: keep earliest, but
            continue;                      // a route match still wins
        }
        if (flattened.find(entry.route) != std::string::npos) {
            chosen = &entry;
            break;
        }
    }
    if (!chosen) {
        ChatResult result;
        result.error_kind = ChatErrorKind::config;
        result.error = "mock script exhausted";
        return result;
    }
    chosen->used = true;

    ChatResult result;
    result.ok = true;
    result.text = chosen->content;
    if (chosen->prompt_tokens && chosen->completion_tokens) {
        result.usage.prompt_tokens = *chosen->prompt_tokens;
        result.usage.completion_tokens = *chosen->completion_tokens;
    } else {
        result.usage.prompt_tokens = estimate_tokens(request_chars);
        result.usage.completion_tokens = estimate_tokens(result.text.size());
        result.usage.estimated = true;
    }
    return result;
}

std::vector<std::vector<ChatMessage>> MockTransport::requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
}

std::size_t MockTransport::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(script_.begin(), script_.end(),
                      [](const ScriptLine& entry) { return !entry.used; }));
}

// ---------------------------------------------------------------------------
// Request gating
// ---------------------------------------------------------------------------

RequestGate::RequestGate(int max_in_flight) : capacity_(max_in_flight < 1 ? 1 : max_in_flight) {}

void RequestGate::acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return in_flight_ < capacity_; });
    ++in_flight_;
    peak_ = std::max(peak_, in_flight_);
}

void RequestGate::release() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        --in_flight_;
    }
    cv_.notify_one();
}

int RequestGate::peak_in_flight() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return peak_;
}

ChatResult GatedTransport::complete(const ProviderConfig& cfg,
                                    const std::vector<ChatMessage>& messages) {
    gate_.acquire();
    ChatResult result = inner_.complete(cfg, messages);
    gate_.release();
    return result;
}

// ---------------------------------------------------------------------------
// Generation loop
// ---------------------------------------------------------------------------

int estimate_tokens(std::size_t character_count) {
    return static_cast<int>((character_count + 3) / 4);
}

namespace {

std::string join_messages(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += "; ";
        out += parts[i];
    }
    return out;
}

}  // namespace

DocumentOutcome generate_document(const Signature& sig, const ProviderConfig& cfg,
                                  ChatTransport& transport, const DocumentCheck& check) {
    DocumentOutcome outcome;
    std::vector<ChatMessage> conversation{{"user", render_prompt(sig)}};

    const int budget = std::max(1, cfg.max_retries);
    std::string last_failure;
    for (int attempt = 0; attempt < budget; ++attempt) {
        ChatResult result = transport.complete(cfg, conversation);
        outcome.prompt_tokens += result.usage.prompt_tokens;
        outcome.completion_tokens += result.usage.completion_tokens;
        outcome.tokens_estimated = outcome.tokens_estimated || result.usage.estimated;

        if (!result.ok) {
            last_failure = "transport error: " + result.error;
            outcome.attempts.push_back({"", last_failure});
            continue;  // same conversation, there is no output to correct
        }

        std::string failure;
        const auto json_text = extract_structured(result.text);
        if (!json_text) {
            failure = "response contained no JSON object";
        } else {
            Json document = Json::parse(*json_text);
            const std::vector<std::string> problems = check(document);
            if (problems.empty()) {
                outcome.attempts.push_back({result.text, std::nullopt});
                outcome.document = std::move(document);
                return outcome;
            }
            failure = join_messages(problems);
        }

        last_failure = failure;
        outcome.attempts.push_back({result.text, failure});
        conversation.push_back({"assistant", result.text});
        conversation.push_back({"user", kCorrectionPrefix + failure + kCorrectionSuffix});
    }

    outcome.error = "retries exhausted: " + last_failure;
    return outcome;
}

GenerationOutcome generate_validated(const Signature& sig, const ProviderConfig& cfg,
                                     ChatTransport& transport,
                                     const DesignValidator& validator) {
    std::optional<GameDesign> parsed_design;
    const DocumentCheck check = [&](const Json& document) -> std::vector<std::string> {
        DesignParseResult parse = parse_design_json(document);
        if (!parse.ok()) return parse.failure.messages();
        std::vector<std::string> problems;
        for (const auto& issue : validator(*parse.design)) {
            problems.push_back(issue.message);
        }
        if (problems.empty()) parsed_design = std::move(parse.design);
        return problems;
    };

    DocumentOutcome doc = generate_document(sig, cfg, transport, check);
    GenerationOutcome outcome;
    outcome.attempts = std::move(doc.attempts);
    outcome.prompt_tokens = doc.prompt_tokens;
    outcome.completion_tokens = doc.completion_tokens;
    outcome.tokens_estimated = doc.tokens_estimated;
    outcome.error = doc.error;
    if (doc.ok()) outcome.design = std::move(parsed_design);
    return outcome;
}

}  // namespace gg::generation

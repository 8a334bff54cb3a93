#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gamegrammar/ontology.hpp"
#include "gamegrammar/validation.hpp"

namespace gg::generation {

enum class ReasoningMode { direct, chain_of_thought };

struct SignatureInput {
    std::string name;
    std::string description;
    std::string value;
};

// Prompt signature: persona plus named inputs plus the output schema the
// model must satisfy.
struct Signature {
    std::string persona;
    std::vector<SignatureInput> inputs;
    FieldCatalog output_catalog;
    ReasoningMode reasoning_mode = ReasoningMode::direct;
};

struct ProviderConfig {
    std::string endpoint_url;
    std::string model_id;
    double temperature = 0.7;
    int max_retries = 3;  // total provider calls allowed per generation
    std::string api_key_env;
    int timeout_ms = 60000;
};

struct ChatMessage {
    std::string role;  // "system", "user", "assistant"
    std::string content;
};

struct Usage {
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool estimated = false;  // provider omitted usage, counts are ceil(chars/4)
};

enum class ChatErrorKind { none, config, network, http, timeout };

struct ChatResult {
    bool ok = false;
    std::string text;
    Usage usage;
    ChatErrorKind error_kind = ChatErrorKind::none;
    std::string error;
    int http_status = 0;
    double elapsed_ms = 0.0;
};

class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual ChatResult complete(const ProviderConfig& cfg,
                                const std::vector<ChatMessage>& messages) = 0;
};

// HTTP chat-completion transport (OpenAI wire shape). Reads the API key from
// the environment variable named in the config before any network activity.
class HttpTransport : public ChatTransport {
public:
    ChatResult complete(const ProviderConfig& cfg,
                        const std::vector<ChatMessage>& messages) override;
};

// Replays scripted responses from a JSONL fixture. Each line is an object
// with "content" (the response text), optional "prompt_tokens" and
// "completion_tokens", and an optional "route". A routed line is consumed
// only by requests whose flattened text contains the route substring, which
// keeps concurrent callers deterministic; the earliest matching routed line
// wins over unrouted lines, and unrouted lines otherwise serve as a shared
// queue in file order. Exhausted scripts produce a config error.
class MockTransport : public ChatTransport {
public:
    bool load_script_text(const std::string& jsonl_text, std::string* error = nullptr);
    bool load_script_file(const std::string& path, std::string* error = nullptr);
    void push_response(const std::string& content, std::string route = "");

    ChatResult complete(const ProviderConfig& cfg,
                        const std::vector<ChatMessage>& messages) override;

    // Every request seen, in completion order.
    std::vector<std::vector<ChatMessage>> requests() const;
    std::size_t remaining() const;

private:
    struct ScriptLine {
        std::string route;  // empty = shared queue
        std::string content;
        std::optional<int> prompt_tokens;
        std::optional<int> completion_tokens;
        bool used = false;
    };
    mutable std::mutex mutex_;
    std::vector<ScriptLine> script_;
    std::vector<std::vector<ChatMessage>> requests_;
};

// Caps concurrent provider calls across threads.
class RequestGate {
public:
    explicit RequestGate(int max_in_flight = 4);
    void acquire();
    void release();
    int peak_in_flight() const;

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    int capacity_;
    int in_flight_ = 0;
    int peak_ = 0;
};

class GatedTransport : public ChatTransport {
public:
    GatedTransport(ChatTransport& inner, RequestGate& gate) : inner_(inner), gate_(gate) {}
    ChatResult complete(const ProviderConfig& cfg,
                        const std::vector<ChatMessage>& messages) override;

private:
    ChatTransport& inner_;
    RequestGate& gate_;
};

// ceil(chars / 4), the usage estimate applied when a provider omits counts.
int estimate_tokens(std::size_t character_count);

// The output-schema block shared by both reasoning modes.
std::string render_field_catalog(const FieldCatalog& catalog);

// Deterministic prompt: persona, inputs, output catalog, and the fenced-JSON
// instruction. chain_of_thought additionally asks for reasoning ahead of the
// fenced block.
std::string render_prompt(const Signature& sig);

// First fenced JSON block, else first balanced JSON object found by
// scanning. Empty optional when the response holds no parseable object.
std::optional<std::string> extract_structured(const std::string& response);

struct Attempt {
    std::string raw_response;
    std::optional<std::string> failure;  // empty on the successful attempt
};

// Maps a candidate document to failure messages; empty means acceptable.
using DocumentCheck = std::function<std::vector<std::string>(const Json&)>;

struct DocumentOutcome {
    std::optional<Json> document;
    std::vector<Attempt> attempts;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool tokens_estimated = false;
    std::string error;  // set when retries were exhausted
    bool ok() const { return document.has_value(); }
    int total_tokens() const { return prompt_tokens + completion_tokens; }
};

struct GenerationOutcome {
    std::optional<GameDesign> design;
    std::vector<Attempt> attempts;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool tokens_estimated = false;
    std::string error;
    bool ok() const { return design.has_value(); }
    int total_tokens() const { return prompt_tokens + completion_tokens; }
};

inline constexpr const char* kCorrectionPrefix = "Your previous output failed validation: ";
inline constexpr const char* kCorrectionSuffix =
    ". Produce a corrected JSON object satisfying every constraint.";

// Core retry loop: render prompt, call transport, extract JSON, run the
// check; on failure append the failure messages as a correction instruction
// and retry, up to cfg.max_retries provider calls. Transport errors consume
// an attempt and are recorded. Token counts sum over all attempts.
DocumentOutcome generate_document(const Signature& sig, const ProviderConfig& cfg,
                                  ChatTransport& transport, const DocumentCheck& check);

using DesignValidator = std::function<std::vector<validation::Issue>(const GameDesign&)>;

// generate_document specialized to the full GameDesign schema: the check is
// parse_design_json followed by the supplied validator.
GenerationOutcome generate_validated(const Signature& sig, const ProviderConfig& cfg,
                                     ChatTransport& transport, const DesignValidator& validator);

}  // namespace gg::generation

#include <chrono>
#include <cstdlib>
#include <string>

#include "gamegrammar/generation.hpp"
#include "httplib.h"

namespace gg::generation {

namespace {

struct ParsedUrl {
    std::string host_origin;  // scheme://host[:port]
    std::string path;
    bool valid = false;
};

ParsedUrl split_url(const std::string& url) {
    ParsedUrl out;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return out;
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        out.host_origin = url;
        out.path = "/";
    } else {
        out.host_origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    out.valid = true;
    return out;
}

bool is_timeout(httplib::Error error) {
    return error == httplib::Error::ConnectionTimeout || error == httplib::Error::Read ||
           error == httplib::Error::Write;
}

}  // namespace

ChatResult HttpTransport::complete(const ProviderConfig& cfg,
                                   const std::vector<ChatMessage>& messages) {
    ChatResult result;
    if (cfg.api_key_env.empty()) {
        result.error_kind = ChatErrorKind::config;
        result.error = "no API key environment variable configured";
        return result;
    }
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        result.error_kind = ChatErrorKind::config;
        result.error = "environment variable " + cfg.api_key_env + " is not set";
        return result;
    }
    const ParsedUrl url = split_url(cfg.endpoint_url);
    if (!url.valid) {
        result.error_kind = ChatErrorKind::config;
        result.error = "endpoint URL must include a scheme: " + cfg.endpoint_url;
        return result;
    }

    Json body;
    body["model"] = cfg.model_id;
    body["temperature"] = cfg.temperature;
    body["messages"] = Json::array();
    std::size_t request_chars = 0;
    for (const auto& message : messages) {
        body["messages"].push_back({{"role", message.role}, {"content", message.content}});
        request_chars += message.content.size();
    }

    httplib::Client client(url.host_origin);
    const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_default_headers({{"Authorization", std::string("Bearer ") + key}});

    const auto start = std::chrono::steady_clock::now();
    httplib::Result response = client.Post(url.path, body.dump(), "application/json");
    result.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();

    if (!response) {
        result.error_kind = is_timeout(response.error()) ? ChatErrorKind::timeout
                                                         : ChatErrorKind::network;
        result.error = httplib::to_string(response.error());
        return result;
    }
    result.http_status = response->status;
    if (response->status < 200 || response->status >= 300) {
        result.error_kind = ChatErrorKind::http;
        result.error = "HTTP " + std::to_string(response->status) + ": " + response->body;
        return result;
    }

    Json payload = Json::parse(response->body, nullptr, false);
    if (payload.is_discarded() || !payload.is_object()) {
        result.error_kind = ChatErrorKind::http;
        result.error = "provider returned a non-JSON body";
        return result;
    }
    if (!payload.contains("choices") || !payload["choices"].is_array() ||
        payload["choices"].empty() ||
        !payload["choices"][0].contains("message") ||
        !payload["choices"][0]["message"].contains("content") ||
        !payload["choices"][0]["message"]["content"].is_string()) {
        result.error_kind = ChatErrorKind::http;
        result.error = "provider response missing choices[0].message.content";
        return result;
    }
    result.text = payload["choices"][0]["message"]["content"].get<std::string>();

    bool usage_present = false;
    if (payload.contains("usage") && payload["usage"].is_object()) {
        const auto& usage = payload["usage"];
        if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number_integer() &&
            usage.contains("completion_tokens") &&
            usage["completion_tokens"].is_number_integer()) {
            result.usage.prompt_tokens = usage["prompt_tokens"].get<int>();
            result.usage.completion_tokens = usage["completion_tokens"].get<int>();
            usage_present = true;
        }
    }
    if (!usage_present) {
        result.usage.prompt_tokens = estimate_tokens(request_chars);
        result.usage.completion_tokens = estimate_tokens(result.text.size());
        result.usage.estimated = true;
    }
    result.ok = true;
    return result;
}

}  // namespace gg::generation

#include "gamegrammar/config.hpp"

namespace gg {

namespace {

// Reads a provider block, mutating `config` only for keys that are present.
bool read_provider(const Json& doc, generation::ProviderConfig& config,
                   std::string* error) {
    if (!doc.is_object()) {
        if (error) *error = "provider block must be an object";
        return false;
    }
    if (doc.contains("endpoint_url")) {
        if (!doc["endpoint_url"].is_string()) {
            if (error) *error = "endpoint_url must be a string";
            return false;
        }
        config.endpoint_url = doc["endpoint_url"].get<std::string>();
    }
    if (doc.contains("model_id")) {
        if (!doc["model_id"].is_string()) {
            if (error) *error = "model_id must be a string";
            return false;
        }
        config.model_id = doc["model_id"].get<std::string>();
    }
    if (doc.contains("temperature")) {
        if (!doc["temperature"].is_number()) {
            if (error) *error = "temperature must be a number";
            return false;
        }
        config.temperature = doc["temperature"].get<double>();
    }
    if (doc.contains("max_retries")) {
        if (!doc["max_retries"].is_number_integer() || doc["max_retries"].get<int>() < 1) {
            if (error) *error = "max_retries must be a positive integer";
            return false;
        }
        config.max_retries = doc["max_retries"].get<int>();
    }
    if (doc.contains("api_key_env")) {
        if (!doc["api_key_env"].is_string()) {
            if (error) *error = "api_key_env must be a string";
            return false;
        }
        config.api_key_env = doc["api_key_env"].get<std::string>();
    }
    if (doc.contains("timeout_ms")) {
        if (!doc["timeout_ms"].is_number_integer() || doc["timeout_ms"].get<int>() < 1) {
            if (error) *error = "timeout_ms must be a positive integer";
            return false;
        }
        config.timeout_ms = doc["timeout_ms"].get<int>();
    }
    return true;
}

Json provider_to_json(const generation::ProviderConfig& config) {
    return Json{{"endpoint_url", config.endpoint_url},
                {"model_id", config.model_id},
                {"temperature", config.temperature},
                {"max_retries", config.max_retries},
                {"api_key_env", config.api_key_env},
                {"timeout_ms", config.timeout_ms}};
}

}  // namespace

AppConfig AppConfig::defaults() {
    AppConfig config;
    config.provider.temperature = 0.7;
    config.evaluator.temperature = 0.0;
    return config;
}

std::optional<AppConfig> AppConfig::from_json(const Json& doc, std::string* error) {
    if (!doc.is_object()) {
        if (error) *error = "config must be a JSON object";
        return std::nullopt;
    }
    AppConfig config = defaults();
    if (doc.contains("provider") && !read_provider(doc["provider"], config.provider, error)) {
        return std::nullopt;
    }
    if (doc.contains("evaluator")) {
        if (!read_provider(doc["evaluator"], config.evaluator, error)) return std::nullopt;
        if (config.evaluator.temperature != 0.0) {
            config.warnings.push_back(
                "evaluator temperature overridden to " +
                std::to_string(config.evaluator.temperature) +
                "; scores will not be comparable across sessions");
        }
    }
    if (doc.contains("embedder_url") && doc["embedder_url"].is_string()) {
        config.embedder_url = doc["embedder_url"].get<std::string>();
    }
    if (doc.contains("corpus_path") && doc["corpus_path"].is_string()) {
        config.corpus_path = doc["corpus_path"].get<std::string>();
    }
    if (doc.contains("agent_spec_path") && doc["agent_spec_path"].is_string()) {
        config.agent_spec_path = doc["agent_spec_path"].get<std::string>();
    }
    if (doc.contains("rule_registry_path") && doc["rule_registry_path"].is_string()) {
        config.rule_registry_path = doc["rule_registry_path"].get<std::string>();
    }
    if (doc.contains("jobs")) {
        if (!doc["jobs"].is_number_integer() || doc["jobs"].get<int>() < 1) {
            if (error) *error = "jobs must be a positive integer";
            return std::nullopt;
        }
        config.jobs = doc["jobs"].get<int>();
    }
    return config;
}

std::optional<AppConfig> AppConfig::load(const std::string& path, std::string* error) {
    Json doc = load_json_file(path, error);
    if (doc.is_discarded()) return std::nullopt;
    return from_json(doc, error);
}

Json AppConfig::to_json() const {
    Json doc;
    doc["provider"] = provider_to_json(provider);
    doc["evaluator"] = provider_to_json(evaluator);
    if (embedder_url) doc["embedder_url"] = *embedder_url;
    if (corpus_path) doc["corpus_path"] = *corpus_path;
    if (!agent_spec_path.empty()) doc["agent_spec_path"] = agent_spec_path;
    if (!rule_registry_path.empty()) doc["rule_registry_path"] = rule_registry_path;
    doc["jobs"] = jobs;
    return doc;
}

}  // namespace gg

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gamegrammar/generation.hpp"

namespace gg {

// Application-level configuration shared by the CLI commands. The evaluator
// runs at temperature 0 unless the file overrides it, in which case a
// warning is recorded rather than silently accepted.
struct AppConfig {
    generation::ProviderConfig provider;
    generation::ProviderConfig evaluator;
    std::optional<std::string> embedder_url;
    std::optional<std::string> corpus_path;
    std::string agent_spec_path;
    std::string rule_registry_path;
    int jobs = 4;

    std::vector<std::string> warnings;

    static AppConfig defaults();
    static std::optional<AppConfig> from_json(const Json& doc, std::string* error = nullptr);
    static std::optional<AppConfig> load(const std::string& path,
                                         std::string* error = nullptr);
    Json to_json() const;
};

}  // namespace gg

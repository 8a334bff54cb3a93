#include "gamegrammar/validation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace gg::validation {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Component presence as the mechanism rules see it. A board counts only if
// the description is non-blank; lists count if they have entries.
struct ComponentView {
    bool has_board = false;
    bool has_cards = false;
    bool has_tokens = false;

    bool field_present(const std::string& field) const {
        if (field == "board_description") return has_board;
        if (field == "card_types") return has_cards;
        if (field == "tokens") return has_tokens;
        return false;
    }
};

ComponentView view_of(const ComponentSet& components) {
    ComponentView view;
    view.has_board =
        components.board_description && trimmed_length(*components.board_description) > 0;
    view.has_cards = !components.card_types.empty();
    view.has_tokens = !components.tokens.empty();
    return view;
}

std::vector<Issue> mechanism_issues(const std::vector<MechanismKind>& mechanisms,
                                    const ComponentView& view, const RuleRegistry& registry) {
    std::vector<Issue> issues;
    for (const auto& rule : registry.mechanism_rules()) {
        if (std::find(mechanisms.begin(), mechanisms.end(), rule.mechanism) ==
            mechanisms.end()) {
            continue;
        }
        bool satisfied = false;
        for (const auto& field : rule.requires_any) {
            if (view.field_present(field)) {
                satisfied = true;
                break;
            }
        }
        if (!satisfied) {
            std::string path = "components";
            if (rule.requires_any.size() == 1) path += "." + rule.requires_any.front();
            issues.push_back({rule.rule_id, rule.message, path, rule.severity});
        }
    }
    return issues;
}

std::vector<Issue> coherence_issues(std::optional<GameType> game_type,
                                    const std::string& interaction_style, int max_players,
                                    const RuleRegistry& registry) {
    std::vector<Issue> issues;
    if (!game_type) return issues;
    if (*game_type == GameType::cooperative) {
        const std::string style = lowercase(interaction_style);
        for (const auto& term : registry.conflict_lexicon()) {
            if (style.find(lowercase(term)) != std::string::npos) {
                issues.push_back({kCooperativeConflictRuleId,
                                  "Cooperative game declares direct conflict ('" + term +
                                      "' in interaction style)",
                                  "players.interaction_style", Severity::moderate});
                break;  // one issue per design, not per term
            }
        }
    }
    if (*game_type == GameType::competitive && max_players == 1) {
        issues.push_back({kCompetitiveSinglePlayerRuleId,
                          "Competitive game supports only a single player",
                          "players.max_players", Severity::moderate});
    }
    return issues;
}

double completeness_of(const GameDesign& design) {
    const auto& required = required_document_fields();
    // A hand-constructed design can still miss constraints parse_design would
    // have caught; score it honestly instead of assuming 1.0.
    const Json doc = design_to_json(design);
    int present = 0;
    for (const auto& name : required) {
        FieldCheck check = check_document_fields(doc, {name});
        if (check.ok()) ++present;
    }
    return static_cast<double>(present) / static_cast<double>(required.size());
}

}  // namespace

std::string to_string(Severity severity) {
    switch (severity) {
        case Severity::minor: return "minor";
        case Severity::moderate: return "moderate";
        case Severity::severe: return "severe";
    }
    return "severe";
}

std::optional<Severity> severity_from_string(std::string_view token) {
    if (token == "minor") return Severity::minor;
    if (token == "moderate") return Severity::moderate;
    if (token == "severe") return Severity::severe;
    return std::nullopt;
}

Json ValidationReport::to_json() const {
    Json doc = Json::object();
    Json arr = Json::array();
    for (const auto& issue : issues) {
        arr.push_back(Json{{"rule_id", issue.rule_id},
                           {"message", issue.message},
                           {"field_path", issue.field_path},
                           {"severity", to_string(issue.severity)}});
    }
    doc["issues"] = std::move(arr);
    doc["consistency_errors"] = consistency_errors;
    doc["completeness"] = completeness;
    return doc;
}

ValidationReport ValidationReport::from_json(const Json& doc) {
    ValidationReport report;
    if (doc.contains("issues") && doc["issues"].is_array()) {
        for (const auto& entry : doc["issues"]) {
            Issue issue;
            if (entry.contains("rule_id") && entry["rule_id"].is_string()) {
                issue.rule_id = entry["rule_id"].get<std::string>();
            }
            if (entry.contains("message") && entry["message"].is_string()) {
                issue.message = entry["message"].get<std::string>();
            }
            if (entry.contains("field_path") && entry["field_path"].is_string()) {
                issue.field_path = entry["field_path"].get<std::string>();
            }
            if (entry.contains("severity") && entry["severity"].is_string()) {
                if (auto parsed = severity_from_string(entry["severity"].get<std::string>())) {
                    issue.severity = *parsed;
                }
            }
            report.issues.push_back(std::move(issue));
        }
    }
    report.consistency_errors = static_cast<int>(report.issues.size());
    if (doc.contains("completeness") && doc["completeness"].is_number()) {
        report.completeness = doc["completeness"].get<double>();
    }
    return report;
}

// ---------------------------------------------------------------------------
// RuleRegistry
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string>& default_conflict_lexicon() {
    static const std::vector<std::string> kLexicon = {"attack", "eliminate", "steal",
                                                      "direct conflict"};
    return kLexicon;
}

}  // namespace

RuleRegistry RuleRegistry::listing_core() {
    RuleRegistry registry;
    registry.mechanism_rules_ = {
        {"deck_building_needs_cards", MechanismKind::deck_building, {"card_types"},
         "Deck building needs cards", Severity::severe},
        {"area_control_needs_board", MechanismKind::area_control, {"board_description"},
         "Area control needs board", Severity::severe},
        {"worker_placement_needs_tokens", MechanismKind::worker_placement, {"tokens"},
         "Workers need tokens", Severity::severe},
    };
    registry.conflict_lexicon_ = default_conflict_lexicon();
    return registry;
}

RuleRegistry RuleRegistry::extended() {
    RuleRegistry registry = listing_core();
    registry.mechanism_rules_.push_back({"set_collection_needs_collectibles",
                                         MechanismKind::set_collection,
                                         {"card_types", "tokens"},
                                         "Set collection needs cards or tokens",
                                         Severity::severe});
    registry.mechanism_rules_.push_back({"resource_management_needs_tokens",
                                         MechanismKind::resource_management,
                                         {"tokens"},
                                         "Resource management needs tokens",
                                         Severity::severe});
    return registry;
}

RuleRegistry RuleRegistry::from_json(const Json& doc) {
    RuleRegistry registry;
    if (!doc.is_object()) throw std::runtime_error("rule registry: expected a JSON object");
    for (const auto& entry : doc.value("mechanism_rules", Json::array())) {
        MechanismRule rule;
        rule.rule_id = entry.at("rule_id").get<std::string>();
        const auto mechanism = mechanism_from_string(entry.at("mechanism").get<std::string>());
        if (!mechanism) {
            throw std::runtime_error("rule registry: unknown mechanism '" +
                                     entry.at("mechanism").get<std::string>() + "'");
        }
        rule.mechanism = *mechanism;
        for (const auto& field : entry.at("requires")) {
            rule.requires_any.push_back(field.get<std::string>());
        }
        rule.message = entry.at("message").get<std::string>();
        const auto severity =
            severity_from_string(entry.value("severity", std::string("severe")));
        if (!severity) {
            throw std::runtime_error("rule registry: unknown severity in rule '" +
                                     rule.rule_id + "'");
        }
        rule.severity = *severity;
        registry.mechanism_rules_.push_back(std::move(rule));
    }
    if (doc.contains("conflict_lexicon")) {
        for (const auto& term : doc.at("conflict_lexicon")) {
            registry.conflict_lexicon_.push_back(term.get<std::string>());
        }
    } else {
        registry.conflict_lexicon_ = default_conflict_lexicon();
    }
    return registry;
}

RuleRegistry RuleRegistry::load(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw std::runtime_error("rule registry: cannot open " + path.string());
    Json doc = Json::parse(stream, nullptr, false);
    if (doc.is_discarded()) {
        throw std::runtime_error("rule registry: invalid JSON in " + path.string());
    }
    return from_json(doc);
}

Json RuleRegistry::to_json() const {
    Json doc = Json::object();
    Json rules = Json::array();
    for (const auto& rule : mechanism_rules_) {
        rules.push_back(Json{{"rule_id", rule.rule_id},
                             {"mechanism", to_string(rule.mechanism)},
                             {"requires", rule.requires_any},
                             {"message", rule.message},
                             {"severity", to_string(rule.severity)}});
    }
    doc["mechanism_rules"] = std::move(rules);
    doc["conflict_lexicon"] = conflict_lexicon_;
    return doc;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

std::vector<Issue> check_mechanism_requirements(const GameDesign& design,
                                                const RuleRegistry& registry) {
    return mechanism_issues(design.primary_mechanisms, view_of(design.components), registry);
}

std::vector<Issue> check_type_coherence(const GameDesign& design,
                                        const RuleRegistry& registry) {
    return coherence_issues(design.game_type, design.players.interaction_style,
                            design.players.max_players, registry);
}

ValidationReport validate(const GameDesign& design, const RuleRegistry& registry) {
    ValidationReport report;
    report.issues = check_mechanism_requirements(design, registry);
    auto coherence = check_type_coherence(design, registry);
    report.issues.insert(report.issues.end(), coherence.begin(), coherence.end());
    report.consistency_errors = static_cast<int>(report.issues.size());
    report.completeness = completeness_of(design);
    return report;
}

ValidationReport validate_raw(const std::string& document, const RuleRegistry& registry) {
    const auto& required = required_document_fields();

    Json doc = Json::parse(document, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        ValidationReport report;
        for (const auto& name : required) {
            report.issues.push_back({kMissingFieldRuleId,
                                     "Required field '" + name + "' is missing", name,
                                     Severity::severe});
        }
        report.consistency_errors = static_cast<int>(report.issues.size());
        report.completeness = 0.0;
        return report;
    }

    // A fully valid document scores identically to validate(parse(document)).
    if (auto parsed = parse_design_json(doc); parsed.ok()) {
        return validate(*parsed.design, registry);
    }

    ValidationReport report;
    int present = 0;
    for (const auto& name : required) {
        if (check_document_fields(doc, {name}).ok()) {
            ++present;
        } else {
            report.issues.push_back({kMissingFieldRuleId,
                                     "Required field '" + name + "' is missing or invalid",
                                     name, Severity::severe});
        }
    }
    report.completeness = static_cast<double>(present) / static_cast<double>(required.size());

    // Best-effort extraction, then the same rules over whatever extracted.
    std::vector<MechanismKind> mechanisms;
    if (doc.contains("primary_mechanisms") && doc.at("primary_mechanisms").is_array()) {
        for (const auto& entry : doc.at("primary_mechanisms")) {
            if (!entry.is_string()) continue;
            if (auto kind = mechanism_from_string(entry.get<std::string>())) {
                if (std::find(mechanisms.begin(), mechanisms.end(), *kind) ==
                    mechanisms.end()) {
                    mechanisms.push_back(*kind);
                }
            }
        }
    }
    ComponentView view;
    if (doc.contains("components") && doc.at("components").is_object()) {
        const Json& components = doc.at("components");
        view.has_board = components.contains("board_description") &&
                         components.at("board_description").is_string() &&
                         trimmed_length(components.at("board_description").get<std::string>()) > 0;
        view.has_cards = components.contains("card_types") &&
                         components.at("card_types").is_array() &&
                         !components.at("card_types").empty();
        view.has_tokens = components.contains("tokens") && components.at("tokens").is_array() &&
                          !components.at("tokens").empty();
    }
    auto mech_issues = mechanism_issues(mechanisms, view, registry);
    report.issues.insert(report.issues.end(), mech_issues.begin(), mech_issues.end());

    std::optional<GameType> game_type;
    if (doc.contains("game_type") && doc.at("game_type").is_string()) {
        game_type = game_type_from_string(doc.at("game_type").get<std::string>());
    }
    std::string interaction_style;
    int max_players = 0;
    if (doc.contains("players") && doc.at("players").is_object()) {
        const Json& players = doc.at("players");
        if (players.contains("interaction_style") &&
            players.at("interaction_style").is_string()) {
            interaction_style = players.at("interaction_style").get<std::string>();
        }
        if (players.contains("max_players") && players.at("max_players").is_number_integer()) {
            max_players = players.at("max_players").get<int>();
        }
    }
    auto type_issues = coherence_issues(game_type, interaction_style, max_players, registry);
    report.issues.insert(report.issues.end(), type_issues.begin(), type_issues.end());

    report.consistency_errors = static_cast<int>(report.issues.size());
    return report;
}

}  // namespace gg::validation

#pragma once

#include "gamegrammar/ontology.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gg::validation {

enum class Severity { minor, moderate, severe };

std::string to_string(Severity severity);
std::optional<Severity> severity_from_string(std::string_view token);

struct Issue {
    std::string rule_id;
    std::string message;
    std::string field_path;
    Severity severity = Severity::severe;

    bool operator==(const Issue&) const = default;
};

struct ValidationReport {
    std::vector<Issue> issues;
    int consistency_errors = 0;  // always == issues.size()
    double completeness = 1.0;   // required fields present / total required

    Json to_json() const;
    static ValidationReport from_json(const Json& doc);
};

/// One mechanism -> component dependency. `requires_any` lists the component
/// fields of which at least one must be non-empty (board_description,
/// card_types, tokens).
struct MechanismRule {
    std::string rule_id;
    MechanismKind mechanism = MechanismKind::worker_placement;
    std::vector<std::string> requires_any;
    std::string message;
    Severity severity = Severity::severe;
};

/// Table-driven rule set. The core set is the three-rule checker excerpt;
/// the extended set adds set_collection and resource_management so study
/// conditions can select either.
class RuleRegistry {
  public:
    static RuleRegistry listing_core();
    static RuleRegistry extended();
    static RuleRegistry from_json(const Json& doc);
    static RuleRegistry load(const std::filesystem::path& path);

    const std::vector<MechanismRule>& mechanism_rules() const { return mechanism_rules_; }
    const std::vector<std::string>& conflict_lexicon() const { return conflict_lexicon_; }

    Json to_json() const;

  private:
    std::vector<MechanismRule> mechanism_rules_;
    std::vector<std::string> conflict_lexicon_;
};

/// Emits one issue per registered mechanism rule whose required component
/// is empty or absent.
std::vector<Issue> check_mechanism_requirements(const GameDesign& design,
                                                const RuleRegistry& registry);

/// Game-type coherence: cooperative designs whose interaction style hits the
/// direct-conflict lexicon, and competitive designs with max_players == 1.
std::vector<Issue> check_type_coherence(const GameDesign& design,
                                        const RuleRegistry& registry);

/// Union of all rule checks with structural metrics. Pure and deterministic.
ValidationReport validate(const GameDesign& design,
                          const RuleRegistry& registry = RuleRegistry::extended());

/// Best-effort scoring of arbitrary text (unconstrained baseline outputs).
/// Never fails: unparseable input scores completeness 0 with one missing-field
/// issue per required field.
ValidationReport validate_raw(const std::string& document,
                              const RuleRegistry& registry = RuleRegistry::extended());

inline const char* kMissingFieldRuleId = "missing_required_field";
inline const char* kCooperativeConflictRuleId = "cooperative_direct_conflict";
inline const char* kCompetitiveSinglePlayerRuleId = "competitive_single_player";

}  // namespace gg::validation

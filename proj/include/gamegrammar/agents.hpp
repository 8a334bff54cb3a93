#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamegrammar/generation.hpp"
#include "gamegrammar/ontology.hpp"
#include "gamegrammar/validation.hpp"

namespace gg::agents {

enum class AgentRole {
    mechanics_architect,
    theme_weaver,
    component_designer,
    balance_critic,
    fun_factor_judge,
};

std::string to_string(AgentRole role);
std::optional<AgentRole> role_from_string(const std::string& token);

struct AgentSpec {
    AgentRole role = AgentRole::mechanics_architect;
    std::string domain;
    std::string anxiety;  // injected verbatim into the rendered persona
    std::string persona;
    std::vector<std::string> owned_fields;  // top-level GameDesign fields this stage fills
};

struct AgentRoster {
    std::vector<AgentSpec> agents;

    static AgentRoster defaults();
    static std::optional<AgentRoster> from_json(const Json& doc, std::string* error = nullptr);
    static std::optional<AgentRoster> load(const std::string& path, std::string* error = nullptr);
    Json to_json() const;

    const AgentSpec* find(AgentRole role) const;
};

// Persona plus the anxiety line, the form every agent prompt starts from.
std::string render_persona(const AgentSpec& spec);

struct CritiqueIssue {
    std::string description;
    validation::Severity severity = validation::Severity::minor;
};

struct CritiqueReport {
    std::vector<CritiqueIssue> issues;
    std::vector<std::string> recommendations;
    std::vector<std::string> exploits;
    // Refinement trigger: any issue at moderate or severe.
    bool needs_refinement() const;
    Json to_json() const;
};

struct FunAssessment {
    std::vector<std::string> engagement_hooks;
    std::vector<std::string> tension_moments;
    std::vector<std::string> satisfaction_sources;
    std::string replayability_notes;
    int fun_rating = 0;  // 1..10
    Json to_json() const;
};

// Output schemas for the two critics, used with the same retry machinery as
// design generation.
FieldCatalog critique_catalog();
FieldCatalog assessment_catalog();

// Checks return failure messages (empty = acceptable document); the
// from_json converters assume a passing document.
std::vector<std::string> check_critique_document(const Json& doc);
std::vector<std::string> check_assessment_document(const Json& doc);
CritiqueReport critique_from_json(const Json& doc);
FunAssessment assessment_from_json(const Json& doc);

struct PipelineRun {
    std::string theme;
    std::string constraints;
    // Successful stage documents in execution order:
    // mechanics_architect, theme_weaver, component_designer, refinement.
    std::vector<std::pair<std::string, Json>> stage_outputs;
    std::optional<GameDesign> final_design;
    std::optional<CritiqueReport> critique;
    bool refined = false;
    std::optional<FunAssessment> assessment;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool tokens_estimated = false;
    std::string error;  // set when a stage exhausted its retries
    bool ok() const { return error.empty() && final_design.has_value(); }
    int total_tokens() const { return prompt_tokens + completion_tokens; }
    int fun_rating() const { return assessment ? assessment->fun_rating : 0; }
    Json to_json() const;
};

// Four-phase pipeline: sequential generation through the three builder
// agents with field-ownership merging, concurrent Balance Critic and Fun
// Factor Judge, one refinement pass when the critique holds a moderate or
// severe issue, and a judge re-run after refinement. Aborts with a partial
// record when any stage exhausts its retries. retrieval_context, when
// non-empty, is injected into the Mechanics Architect prompt only.
PipelineRun run_pipeline(const std::string& theme, const std::string& constraints,
                         const generation::ProviderConfig& cfg,
                         generation::ChatTransport& transport, const AgentRoster& roster,
                         const validation::RuleRegistry& registry,
                         const std::string& retrieval_context = "");

enum class Condition { C1, C2, C3, C4 };

std::string to_string(Condition condition);
std::optional<Condition> condition_from_string(const std::string& token);

// The single-agent persona used by conditions C1..C3.
std::string designer_persona();

// Builds the single-agent full-design signature shared by C2 and C3.
generation::Signature design_signature(const std::string& theme, const std::string& constraints,
                                       generation::ReasoningMode mode);

// Ablation conditions C1..C3. C1 makes exactly one free-text call with no
// schema and no retry (its raw output is scored via validate_raw); C2 runs
// the schema prompt with parse-only retry; C3 adds full ontology-validation
// retry. C4 is run_pipeline.
generation::GenerationOutcome single_agent_generate(const std::string& theme,
                                                    const std::string& constraints,
                                                    const generation::ProviderConfig& cfg,
                                                    generation::ChatTransport& transport,
                                                    Condition mode,
                                                    const validation::RuleRegistry& registry);

}  // namespace gg::agents

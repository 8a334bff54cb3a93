#include "gamegrammar/agents.hpp"

#include <future>
#include <stdexcept>

namespace gg::agents {

// ---------------------------------------------------------------------------
// Roles and roster
// ---------------------------------------------------------------------------

std::string to_string(AgentRole role) {
    switch (role) {
        case AgentRole::mechanics_architect: return "mechanics_architect";
        case AgentRole::theme_weaver: return "theme_weaver";
        case AgentRole::component_designer: return "component_designer";
        case AgentRole::balance_critic: return "balance_critic";
        case AgentRole::fun_factor_judge: return "fun_factor_judge";
    }
    return "mechanics_architect";
}

std::optional<AgentRole> role_from_string(const std::string& token) {
    for (AgentRole role : {AgentRole::mechanics_architect, AgentRole::theme_weaver,
                           AgentRole::component_designer, AgentRole::balance_critic,
                           AgentRole::fun_factor_judge}) {
        if (to_string(role) == token) return role;
    }
    return std::nullopt;
}

AgentRoster AgentRoster::defaults() {
    AgentRoster roster;
    roster.agents = {
        {AgentRole::mechanics_architect, "Mechanisms, turn structure",
         "Is there meaningful player agency?",
         "You are the Mechanics Architect on a tabletop design team. You own the "
         "game's systems: mechanisms, turn structure, the core loop, and how "
         "uncertainty enters play. Pick mechanisms that reinforce each other and "
         "give every player real decisions.",
         {"game_type", "goal", "end_condition", "primary_mechanisms", "turn_structure",
          "uncertainty_source", "core_loop", "strategic_depth", "players"}},
        {AgentRole::theme_weaver, "Narrative, setting",
         "Does the theme feel alive in every mechanism?",
         "You are the Theme Weaver on a tabletop design team. You own narrative and "
         "setting. Bind every mechanism the team has chosen to the fiction so the "
         "theme is felt during play, not pasted on.",
         {"title", "theme", "setup"}},
        {AgentRole::component_designer, "Cards, tokens, board",
         "Can players manipulate this smoothly?",
         "You are the Component Designer on a tabletop design team. You own the "
         "physical pieces: cards, tokens, and the board. Specify components players "
         "can actually shuffle, stack, and move, and that cover what the mechanisms "
         "demand.",
         {"components"}},
        {AgentRole::balance_critic, "Cross-domain analysis",
         "What breaks when optimized?",
         "You are the Balance Critic, a cross-domain analyst. Examine the assembled "
         "design for exploits, dominant strategies, and interaction gaps. Be "
         "specific about what a ruthless optimizer would do.",
         {}},
        {AgentRole::fun_factor_judge, "Player experience",
         "Would I want to play this again?",
         "You are the Fun Factor Judge, focused on player experience. Evaluate the "
         "design's engagement hooks, tension moments, satisfaction sources, and "
         "replayability, then rate how fun it would actually be.",
         {}},
    };
    return roster;
}

std::optional<AgentRoster> AgentRoster::from_json(const Json& doc, std::string* error) {
    auto fail = [&](const std::string& message) -> std::optional<AgentRoster> {
        if (error) *error = message;
        return std::nullopt;
    };
    if (!doc.is_object() || !doc.contains("agents") || !doc["agents"].is_array()) {
        return fail("roster must be an object with an \"agents\" array");
    }
    AgentRoster roster;
    for (const auto& entry : doc["agents"]) {
        if (!entry.is_object()) return fail("agent entries must be objects");
        AgentSpec spec;
        if (!entry.contains("role") || !entry["role"].is_string()) {
            return fail("agent entry missing \"role\"");
        }
        const auto role = role_from_string(entry["role"].get<std::string>());
        if (!role) return fail("unknown agent role \"" + entry["role"].get<std::string>() + "\"");
        spec.role = *role;
        if (!entry.contains("anxiety") || !entry["anxiety"].is_string() ||
            entry["anxiety"].get<std::string>().empty()) {
            return fail(to_string(*role) + ": \"anxiety\" must be a non-empty string");
        }
        spec.anxiety = entry["anxiety"].get<std::string>();
        if (entry.contains("domain") && entry["domain"].is_string()) {
            spec.domain = entry["domain"].get<std::string>();
        }
        if (!entry.contains("persona") || !entry["persona"].is_string() ||
            entry["persona"].get<std::string>().empty()) {
            return fail(to_string(*role) + ": \"persona\" must be a non-empty string");
        }
        spec.persona = entry["persona"].get<std::string>();
        if (entry.contains("owned_fields")) {
            if (!entry["owned_fields"].is_array()) {
                return fail(to_string(*role) + ": \"owned_fields\" must be an array");
            }
            for (const auto& field : entry["owned_fields"]) {
                if (!field.is_string()) {
                    return fail(to_string(*role) + ": owned field names must be strings");
                }
                spec.owned_fields.push_back(field.get<std::string>());
            }
        }
        roster.agents.push_back(std::move(spec));
    }
    for (AgentRole role : {AgentRole::mechanics_architect, AgentRole::theme_weaver,
                           AgentRole::component_designer, AgentRole::balance_critic,
                           AgentRole::fun_factor_judge}) {
        if (roster.find(role) == nullptr) return fail("roster missing " + to_string(role));
    }
    return roster;
}

std::optional<AgentRoster> AgentRoster::load(const std::string& path, std::string* error) {
    Json doc = load_json_file(path, error);
    if (doc.is_discarded()) return std::nullopt;
    return from_json(doc, error);
}

Json AgentRoster::to_json() const {
    Json doc;
    doc["agents"] = Json::array();
    for (const auto& spec : agents) {
        Json entry;
        entry["role"] = to_string(spec.role);
        entry["domain"] = spec.domain;
        entry["anxiety"] = spec.anxiety;
        entry["persona"] = spec.persona;
        entry["owned_fields"] = spec.owned_fields;
        doc["agents"].push_back(std::move(entry));
    }
    return doc;
}

const AgentSpec* AgentRoster::find(AgentRole role) const {
    for (const auto& spec : agents) {
        if (spec.role == role) return &spec;
    }
    return nullptr;
}

std::string render_persona(const AgentSpec& spec) {
    return spec.persona + "\nYour professional anxiety: " + spec.anxiety;
}

// ---------------------------------------------------------------------------
// Critique and assessment schemas
// ---------------------------------------------------------------------------

bool CritiqueReport::needs_refinement() const {
    for (const auto& issue : issues) {
        if (issue.severity != validation::Severity::minor) return true;
    }
    return false;
}

Json CritiqueReport::to_json() const {
    Json doc;
    doc["issues"] = Json::array();
    for (const auto& issue : issues) {
        doc["issues"].push_back(
            {{"description", issue.description}, {"severity", validation::to_string(issue.severity)}});
    }
    doc["recommendations"] = recommendations;
    doc["exploits"] = exploits;
    return doc;
}

Json FunAssessment::to_json() const {
    Json doc;
    doc["engagement_hooks"] = engagement_hooks;
    doc["tension_moments"] = tension_moments;
    doc["satisfaction_sources"] = satisfaction_sources;
    doc["replayability_notes"] = replayability_notes;
    doc["fun_rating"] = fun_rating;
    return doc;
}

FieldCatalog critique_catalog() {
    FieldCatalog catalog;
    catalog.fields = {
        {"issues", true, 0, 0, "Problems found in the design", "array of objects", {}},
        {"issues[].description", true, 1, 0, "What is wrong and where", "string", {}},
        {"issues[].severity", true, 0, 0, "How badly it undermines play", "string",
         {"minor", "moderate", "severe"}},
        {"recommendations", true, 0, 0, "Specific changes that would resolve the issues",
         "array of strings", {}},
        {"exploits", true, 0, 0, "Degenerate strategies an optimizing player could abuse",
         "array of strings", {}},
    };
    return catalog;
}

FieldCatalog assessment_catalog() {
    FieldCatalog catalog;
    catalog.fields = {
        {"engagement_hooks", true, 0, 0, "What pulls players into the game", "array of strings",
         {}},
        {"tension_moments", true, 0, 0, "Where the drama peaks during play", "array of strings",
         {}},
        {"satisfaction_sources", true, 0, 0, "What feels rewarding to do", "array of strings", {}},
        {"replayability_notes", true, 1, 0, "Why the game stays fresh across plays", "string", {}},
        {"fun_rating", true, 0, 0, "Overall fun on a 1 to 10 scale", "integer 1-10", {}},
    };
    return catalog;
}

namespace {

bool string_array(const Json& value) {
    if (!value.is_array()) return false;
    for (const auto& item : value) {
        if (!item.is_string()) return false;
    }
    return true;
}

}  // namespace

std::vector<std::string> check_critique_document(const Json& doc) {
    std::vector<std::string> problems;
    if (!doc.is_object()) return {"critique must be a JSON object"};
    if (!doc.contains("issues") || !doc["issues"].is_array()) {
        problems.push_back("\"issues\" must be an array");
    } else {
        for (const auto& issue : doc["issues"]) {
            if (!issue.is_object() || !issue.contains("description") ||
                !issue["description"].is_string() ||
                issue["description"].get<std::string>().empty()) {
                problems.push_back("each issue needs a non-empty \"description\"");
                break;
            }
        }
        for (const auto& issue : doc["issues"]) {
            if (!issue.is_object()) continue;
            if (!issue.contains("severity") || !issue["severity"].is_string() ||
                !validation::severity_from_string(issue["severity"].get<std::string>())) {
                problems.push_back(
                    "each issue needs a \"severity\" of minor, moderate, or severe");
                break;
            }
        }
    }
    if (!doc.contains("recommendations") || !string_array(doc["recommendations"])) {
        problems.push_back("\"recommendations\" must be an array of strings");
    }
    if (!doc.contains("exploits") || !string_array(doc["exploits"])) {
        problems.push_back("\"exploits\" must be an array of strings");
    }
    return problems;
}

std::vector<std::string> check_assessment_document(const Json& doc) {
    std::vector<std::string> problems;
    if (!doc.is_object()) return {"assessment must be a JSON object"};
    for (const char* field : {"engagement_hooks", "tension_moments", "satisfaction_sources"}) {
        if (!doc.contains(field) || !string_array(doc[field])) {
            problems.push_back("\"" + std::string(field) + "\" must be an array of strings");
        }
    }
    if (!doc.contains("replayability_notes") || !doc["replayability_notes"].is_string() ||
        doc["replayability_notes"].get<std::string>().empty()) {
        problems.push_back("\"replayability_notes\" must be a non-empty string");
    }
    if (!doc.contains("fun_rating") || !doc["fun_rating"].is_number_integer()) {
        problems.push_back("\"fun_rating\" must be an integer");
    } else {
        const int rating = doc["fun_rating"].get<int>();
        if (rating < 1 || rating > 10) {
            problems.push_back("\"fun_rating\" must be between 1 and 10");
        }
    }
    return problems;
}

CritiqueReport critique_from_json(const Json& doc) {
    CritiqueReport report;
    for (const auto& entry : doc["issues"]) {
        CritiqueIssue issue;
        issue.description = entry["description"].get<std::string>();
        issue.severity = *validation::severity_from_string(entry["severity"].get<std::string>());
        report.issues.push_back(std::move(issue));
    }
    for (const auto& item : doc["recommendations"]) {
        report.recommendations.push_back(item.get<std::string>());
    }
    for (const auto& item : doc["exploits"]) {
        report.exploits.push_back(item.get<std::string>());
    }
    return report;
}

FunAssessment assessment_from_json(const Json& doc) {
    FunAssessment assessment;
    for (const auto& item : doc["engagement_hooks"]) {
        assessment.engagement_hooks.push_back(item.get<std::string>());
    }
    for (const auto& item : doc["tension_moments"]) {
        assessment.tension_moments.push_back(item.get<std::string>());
    }
    for (const auto& item : doc["satisfaction_sources"]) {
        assessment.satisfaction_sources.push_back(item.get<std::string>());
    }
    assessment.replayability_notes = doc["replayability_notes"].get<std::string>();
    assessment.fun_rating = doc["fun_rating"].get<int>();
    return assessment;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

Json PipelineRun::to_json() const {
    Json doc;
    doc["theme"] = theme;
    doc["constraints"] = constraints;
    doc["stage_outputs"] = Json::object();
    for (const auto& [stage, output] : stage_outputs) {
        doc["stage_outputs"][stage] = output;
    }
    doc["final_design"] = final_design ? design_to_json(*final_design) : Json();
    doc["critique"] = critique ? critique->to_json() : Json();
    doc["refined"] = refined;
    doc["assessment"] = assessment ? assessment->to_json() : Json();
    doc["prompt_tokens"] = prompt_tokens;
    doc["completion_tokens"] = completion_tokens;
    doc["tokens_estimated"] = tokens_estimated;
    doc["total_tokens"] = total_tokens();
    if (!error.empty()) doc["error"] = error;
    return doc;
}

namespace {

std::vector<generation::SignatureInput> base_inputs(const std::string& theme,
                                                    const std::string& constraints) {
    return {{"theme", "Thematic concept for the game", theme},
            {"design_constraints", "Player count, complexity, time", constraints}};
}

std::string render_critique_for_refinement(const CritiqueReport& critique) {
    std::string out = "Issues:\n";
    for (const auto& issue : critique.issues) {
        out += "- [" + validation::to_string(issue.severity) + "] " + issue.description + "\n";
    }
    out += "Recommendations:\n";
    for (const auto& rec : critique.recommendations) {
        out += "- " + rec + "\n";
    }
    if (!critique.exploits.empty()) {
        out += "Exploits:\n";
        for (const auto& exploit : critique.exploits) {
            out += "- " + exploit + "\n";
        }
    }
    return out;
}

generation::DocumentOutcome run_critic_stage(const AgentSpec& spec, const std::string& theme,
                                             const std::string& constraints,
                                             const std::string& design_text,
                                             const generation::ProviderConfig& cfg,
                                             generation::ChatTransport& transport) {
    generation::Signature sig;
    sig.persona = render_persona(spec);
    sig.inputs = base_inputs(theme, constraints);
    sig.inputs.push_back({"assembled_design", "The complete design under review", design_text});
    const bool is_judge = spec.role == AgentRole::fun_factor_judge;
    sig.output_catalog = is_judge ? assessment_catalog() : critique_catalog();
    const generation::DocumentCheck check =
        is_judge ? generation::DocumentCheck(check_assessment_document)
                 : generation::DocumentCheck(check_critique_document);
    return generation::generate_document(sig, cfg, transport, check);
}

}  // namespace

PipelineRun run_pipeline(const std::string& theme, const std::string& constraints,
                         const generation::ProviderConfig& cfg,
                         generation::ChatTransport& transport, const AgentRoster& roster,
                         const validation::RuleRegistry& registry,
                         const std::string& retrieval_context) {
    PipelineRun run;
    run.theme = theme;
    run.constraints = constraints;

    const auto add_tokens = [&run](const auto& outcome) {
        run.prompt_tokens += outcome.prompt_tokens;
        run.completion_tokens += outcome.completion_tokens;
        run.tokens_estimated = run.tokens_estimated || outcome.tokens_estimated;
    };

    // Phase 1: sequential generation with field-ownership merging.
    Json merged = Json::object();
    for (AgentRole role : {AgentRole::mechanics_architect, AgentRole::theme_weaver,
                           AgentRole::component_designer}) {
        const AgentSpec* spec = roster.find(role);
        if (spec == nullptr) {
            run.error = "roster missing " + to_string(role);
            return run;
        }
        generation::Signature sig;
        sig.persona = render_persona(*spec);
        sig.inputs = base_inputs(theme, constraints);
        if (role == AgentRole::mechanics_architect && !retrieval_context.empty()) {
            sig.inputs.push_back(
                {"design_precedents", "Published games with related mechanisms",
                 retrieval_context});
        }
        if (role != AgentRole::mechanics_architect) {
            sig.inputs.push_back(
                {"current_design", "The design assembled so far", merged.dump(2)});
        }
        sig.output_catalog = field_catalog().subset(spec->owned_fields);

        generation::DocumentCheck check;
        if (role == AgentRole::component_designer) {
            // Last builder: the merged document must now parse and validate.
            check = [&merged, spec, &registry](const Json& doc) -> std::vector<std::string> {
                std::vector<std::string> problems =
                    check_document_fields(doc, spec->owned_fields).messages();
                if (!problems.empty()) return problems;
                Json candidate = merged;
                for (const auto& field : spec->owned_fields) {
                    if (doc.contains(field)) candidate[field] = doc.at(field);
                }
                DesignParseResult parse = parse_design_json(candidate);
                if (!parse.ok()) return parse.failure.messages();
                for (const auto& issue : validation::validate(*parse.design, registry).issues) {
                    problems.push_back(issue.message);
                }
                return problems;
            };
        } else {
            check = [spec](const Json& doc) {
                return check_document_fields(doc, spec->owned_fields).messages();
            };
        }

        generation::DocumentOutcome outcome =
            generation::generate_document(sig, cfg, transport, check);
        add_tokens(outcome);
        if (!outcome.ok()) {
            run.error = to_string(role) + ": " + outcome.error;
            return run;
        }
        for (const auto& field : spec->owned_fields) {
            if (outcome.document->contains(field)) merged[field] = outcome.document->at(field);
        }
        run.stage_outputs.push_back({to_string(role), *outcome.document});
    }

    DesignParseResult assembled = parse_design_json(merged);
    if (!assembled.ok()) {
        run.error = "assembled design failed to parse: " + assembled.failure.summary();
        return run;
    }
    run.final_design = std::move(assembled.design);

    const AgentSpec* critic = roster.find(AgentRole::balance_critic);
    const AgentSpec* judge = roster.find(AgentRole::fun_factor_judge);
    if (critic == nullptr || judge == nullptr) {
        run.error = "roster missing a critic role";
        return run;
    }

    // Phases 2 and 4: the two critics evaluate concurrently.
    const std::string design_text = serialize_design(*run.final_design);
    auto critic_future = std::async(std::launch::async, [&] {
        return run_critic_stage(*critic, theme, constraints, design_text, cfg, transport);
    });
    generation::DocumentOutcome judge_outcome =
        run_critic_stage(*judge, theme, constraints, design_text, cfg, transport);
    generation::DocumentOutcome critic_outcome = critic_future.get();
    add_tokens(critic_outcome);
    add_tokens(judge_outcome);
    if (!critic_outcome.ok()) {
        run.error = "balance_critic: " + critic_outcome.error;
        return run;
    }
    run.critique = critique_from_json(*critic_outcome.document);
    if (!judge_outcome.ok()) {
        run.error = "fun_factor_judge: " + judge_outcome.error;
        return run;
    }
    run.assessment = assessment_from_json(*judge_outcome.document);

    if (!run.critique->needs_refinement()) return run;

    // Phase 3: one refinement pass seeded with the critique.
    generation::Signature refine_sig;
    refine_sig.persona =
        "You are the refinement agent on a tabletop design team. Address the "
        "critique's specific recommendations while preserving the design's "
        "strengths. Return the complete corrected design, not a diff.";
    refine_sig.inputs = base_inputs(theme, constraints);
    refine_sig.inputs.push_back({"current_design", "The design under refinement", design_text});
    refine_sig.inputs.push_back(
        {"critique", "Balance Critic findings to address",
         render_critique_for_refinement(*run.critique)});
    refine_sig.output_catalog = field_catalog();

    std::optional<GameDesign> refined_design;
    const generation::DocumentCheck refine_check = [&](const Json& doc) {
        DesignParseResult parse = parse_design_json(doc);
        if (!parse.ok()) return parse.failure.messages();
        std::vector<std::string> problems;
        for (const auto& issue : validation::validate(*parse.design, registry).issues) {
            problems.push_back(issue.message);
        }
        if (problems.empty()) refined_design = std::move(parse.design);
        return problems;
    };
    generation::DocumentOutcome refine_outcome =
        generation::generate_document(refine_sig, cfg, transport, refine_check);
    add_tokens(refine_outcome);
    if (!refine_outcome.ok()) {
        run.error = "refinement: " + refine_outcome.error;
        return run;
    }
    run.stage_outputs.push_back({"refinement", *refine_outcome.document});
    run.final_design = std::move(refined_design);
    run.refined = true;

    // Re-assess the refined design; the judge is the only critic re-run.
    generation::DocumentOutcome reassessment = run_critic_stage(
        *judge, theme, constraints, serialize_design(*run.final_design), cfg, transport);
    add_tokens(reassessment);
    if (!reassessment.ok()) {
        run.assessment.reset();
        run.error = "fun_factor_judge (post-refinement): " + reassessment.error;
        return run;
    }
    run.assessment = assessment_from_json(*reassessment.document);
    return run;
}

// ---------------------------------------------------------------------------
// Ablation conditions
// ---------------------------------------------------------------------------

std::string to_string(Condition condition) {
    switch (condition) {
        case Condition::C1: return "C1";
        case Condition::C2: return "C2";
        case Condition::C3: return "C3";
        case Condition::C4: return "C4";
    }
    return "C1";
}

std::optional<Condition> condition_from_string(const std::string& token) {
    if (token == "C1" || token == "c1") return Condition::C1;
    if (token == "C2" || token == "c2") return Condition::C2;
    if (token == "C3" || token == "c3") return Condition::C3;
    if (token == "C4" || token == "c4") return Condition::C4;
    return std::nullopt;
}

std::string designer_persona() {
    return "You are an expert tabletop game designer with deep knowledge of "
           "mechanisms, player dynamics, and component design. Design a complete, "
           "playable game based on the theme. Every field must be specific, not "
           "vague.";
}

generation::Signature design_signature(const std::string& theme, const std::string& constraints,
                                       generation::ReasoningMode mode) {
    generation::Signature sig;
    sig.persona = designer_persona();
    sig.inputs = base_inputs(theme, constraints);
    sig.output_catalog = field_catalog();
    sig.reasoning_mode = mode;
    return sig;
}

generation::GenerationOutcome single_agent_generate(const std::string& theme,
                                                    const std::string& constraints,
                                                    const generation::ProviderConfig& cfg,
                                                    generation::ChatTransport& transport,
                                                    Condition mode,
                                                    const validation::RuleRegistry& registry) {
    if (mode == Condition::C4) {
        throw std::invalid_argument("C4 is the full pipeline; call run_pipeline");
    }
    if (mode == Condition::C1) {
        // One free-text call: no schema, no validation, no retry. The raw
        // output is scored downstream via validate_raw.
        std::string prompt = designer_persona();
        prompt += "\n\nInputs:\n";
        for (const auto& input : base_inputs(theme, constraints)) {
            prompt += "- " + input.name + " (" + input.description + "): " + input.value + "\n";
        }
        prompt += "\nDescribe the complete game design.\n";
        generation::ChatResult result = transport.complete(cfg, {{"user", prompt}});
        generation::GenerationOutcome outcome;
        outcome.prompt_tokens = result.usage.prompt_tokens;
        outcome.completion_tokens = result.usage.completion_tokens;
        outcome.tokens_estimated = result.usage.estimated;
        if (result.ok) {
            outcome.attempts.push_back({result.text, std::nullopt});
        } else {
            outcome.error = "transport error: " + result.error;
            outcome.attempts.push_back({"", outcome.error});
        }
        return outcome;
    }

    const generation::Signature sig =
        design_signature(theme, constraints, generation::ReasoningMode::direct);
    if (mode == Condition::C2) {
        return generation::generate_validated(
            sig, cfg, transport,
            [](const GameDesign&) { return std::vector<validation::Issue>{}; });
    }
    return generation::generate_validated(sig, cfg, transport, [&registry](const GameDesign& d) {
        return validation::validate(d, registry).issues;
    });
}

}  // namespace gg::agents

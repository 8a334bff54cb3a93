#include <string>
#include <vector>

#include "doctest.h"
#include "gamegrammar/agents.hpp"
#include "gamegrammar/validation.hpp"
#include "helpers.hpp"

using namespace gg;
using namespace gg::agents;

namespace {

generation::ProviderConfig test_config(int budget) {
    generation::ProviderConfig cfg;
    cfg.max_retries = budget;
    return cfg;
}

// A fixed cooperative design whose mechanisms exercise two registry rules
// (resource_management, area_control) and that validates with zero issues.
GameDesign cave_design() {
    GameDesign d;
    d.title = "Mycelium";
    d.theme = "Bioluminescent fungi spreading through a cave ecosystem";
    d.game_type = GameType::cooperative;
    d.goal = "Illuminate every cavern chamber before the cold season arrives";
    d.end_condition = "Game ends when the season track reaches winter";
    d.primary_mechanisms = {MechanismKind::resource_management, MechanismKind::area_control,
                            MechanismKind::engine_building};
    d.players.min_players = 2;
    d.players.max_players = 4;
    d.players.interaction_style = "shared planning with individual execution";
    d.turn_structure = "Spread one colony, harvest nutrients, then resolve a cave event";
    d.uncertainty_source = "shuffled cave event deck";
    d.core_loop = "Grow hyphae into new chambers, convert nutrients to light, weather the events";
    d.strategic_depth = "Choosing which chambers to light first shapes the network's efficiency";
    d.components.board_description = "Cave map of interlocking chambers";
    d.components.card_types = {{"cave event cards", "pace the threat"},
                               {"growth cards", "unlock colony abilities"}};
    d.components.tokens = {{"nutrient tokens", "fuel growth"},
                           {"spore tokens", "mark expansion"}};
    d.setup = "Place the entry chamber, seed three nutrient pools, deal two growth cards each";
    return d;
}

Json stage_doc(const AgentRoster& roster, AgentRole role, const Json& full) {
    Json doc = Json::object();
    for (const auto& field : roster.find(role)->owned_fields) doc[field] = full.at(field);
    return doc;
}

std::string fenced(const Json& payload) { return "```json\n" + payload.dump(2) + "\n```"; }

std::string script_line(const std::string& content, const std::string& route, int prompt_tokens,
                        int completion_tokens) {
    Json line;
    line["content"] = content;
    if (!route.empty()) line["route"] = route;
    line["prompt_tokens"] = prompt_tokens;
    line["completion_tokens"] = completion_tokens;
    return line.dump() + "\n";
}

Json critique_json(const std::string& severity) {
    Json doc;
    doc["issues"] = Json::array(
        {Json{{"description", "Runaway leader: an early nutrient engine snowballs unchecked"},
              {"severity", severity}}});
    doc["recommendations"] = Json::array(
        {"Add a Network Synergy rule sharing light bonuses between adjacent colonies"});
    doc["exploits"] = Json::array({"Rush the largest chamber cluster and ignore the event deck"});
    return doc;
}

Json assessment_json(int rating) {
    Json doc;
    doc["engagement_hooks"] = Json::array({"watching the cave bloom with light"});
    doc["tension_moments"] = Json::array({"event reveals that threaten the network"});
    doc["satisfaction_sources"] = Json::array({"multi-chamber combo turns"});
    doc["replayability_notes"] = "Chamber layouts and event order reshuffle every session";
    doc["fun_rating"] = rating;
    return doc;
}

std::string flatten(const std::vector<generation::ChatMessage>& messages) {
    std::string out;
    for (const auto& message : messages) out += message.content + "\n";
    return out;
}

constexpr const char* kCriticRoute = "You are the Balance Critic";
constexpr const char* kJudgeRoute = "You are the Fun Factor Judge";
constexpr const char* kRefineRoute = "You are the refinement agent";

}  // namespace

TEST_CASE("agent roles round-trip through their tokens") {
    const std::vector<AgentRole> roles = {AgentRole::mechanics_architect, AgentRole::theme_weaver,
                                          AgentRole::component_designer, AgentRole::balance_critic,
                                          AgentRole::fun_factor_judge};
    for (AgentRole role : roles) {
        const auto parsed = role_from_string(to_string(role));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == role);
    }
    CHECK_FALSE(role_from_string("dungeon_master").has_value());
    CHECK_FALSE(role_from_string("").has_value());
}

TEST_CASE("default roster carries the full team sheet") {
    const AgentRoster roster = AgentRoster::defaults();
    REQUIRE(roster.agents.size() == 5);

    const AgentSpec* architect = roster.find(AgentRole::mechanics_architect);
    REQUIRE(architect != nullptr);
    CHECK(architect->domain == "Mechanisms, turn structure");
    CHECK(architect->anxiety == "Is there meaningful player agency?");
    CHECK(architect->owned_fields ==
          std::vector<std::string>{"game_type", "goal", "end_condition", "primary_mechanisms",
                                   "turn_structure", "uncertainty_source", "core_loop",
                                   "strategic_depth", "players"});

    const AgentSpec* weaver = roster.find(AgentRole::theme_weaver);
    REQUIRE(weaver != nullptr);
    CHECK(weaver->domain == "Narrative, setting");
    CHECK(weaver->anxiety == "Does the theme feel alive in every mechanism?");
    CHECK(weaver->owned_fields == std::vector<std::string>{"title", "theme", "setup"});

    const AgentSpec* components = roster.find(AgentRole::component_designer);
    REQUIRE(components != nullptr);
    CHECK(components->domain == "Cards, tokens, board");
    CHECK(components->anxiety == "Can players manipulate this smoothly?");
    CHECK(components->owned_fields == std::vector<std::string>{"components"});

    const AgentSpec* critic = roster.find(AgentRole::balance_critic);
    REQUIRE(critic != nullptr);
    CHECK(critic->domain == "Cross-domain analysis");
    CHECK(critic->anxiety == "What breaks when optimized?");
    CHECK(critic->owned_fields.empty());

    const AgentSpec* judge = roster.find(AgentRole::fun_factor_judge);
    REQUIRE(judge != nullptr);
    CHECK(judge->domain == "Player experience");
    CHECK(judge->anxiety == "Would I want to play this again?");
    CHECK(judge->owned_fields.empty());

    // The builder agents own the 13 top-level fields exactly once between them.
    std::vector<std::string> owned;
    for (const auto& spec : roster.agents) {
        owned.insert(owned.end(), spec.owned_fields.begin(), spec.owned_fields.end());
    }
    CHECK(owned.size() == 13);
    std::sort(owned.begin(), owned.end());
    CHECK(std::adjacent_find(owned.begin(), owned.end()) == owned.end());

    // Personas double as mock-transcript routes, so their openings are pinned.
    CHECK(architect->persona.find("You are the Mechanics Architect") != std::string::npos);
    CHECK(weaver->persona.find("You are the Theme Weaver") != std::string::npos);
    CHECK(components->persona.find("You are the Component Designer") != std::string::npos);
    CHECK(critic->persona.find(kCriticRoute) != std::string::npos);
    CHECK(judge->persona.find(kJudgeRoute) != std::string::npos);
}

TEST_CASE("render_persona appends the anxiety line verbatim") {
    AgentSpec spec;
    spec.persona = "You are the Balance Critic, a cross-domain analyst.";
    spec.anxiety = "What breaks when optimized?";
    CHECK(render_persona(spec) ==
          "You are the Balance Critic, a cross-domain analyst."
          "\nYour professional anxiety: What breaks when optimized?");
}

TEST_CASE("roster serialization round-trips and rejects bad documents") {
    SUBCASE("round trip preserves every spec") {
        const AgentRoster roster = AgentRoster::defaults();
        std::string error;
        const auto parsed = AgentRoster::from_json(roster.to_json(), &error);
        REQUIRE_MESSAGE(parsed.has_value(), error);
        REQUIRE(parsed->agents.size() == roster.agents.size());
        for (std::size_t i = 0; i < roster.agents.size(); ++i) {
            CHECK(parsed->agents[i].role == roster.agents[i].role);
            CHECK(parsed->agents[i].domain == roster.agents[i].domain);
            CHECK(parsed->agents[i].anxiety == roster.agents[i].anxiety);
            CHECK(parsed->agents[i].persona == roster.agents[i].persona);
            CHECK(parsed->agents[i].owned_fields == roster.agents[i].owned_fields);
        }
    }

    SUBCASE("top-level shape is enforced") {
        std::string error;
        CHECK_FALSE(AgentRoster::from_json(Json{{"agents", 5}}, &error).has_value());
        CHECK(error == "roster must be an object with an \"agents\" array");
        CHECK_FALSE(AgentRoster::from_json(Json::array(), &error).has_value());
    }

    SUBCASE("entries need a known role") {
        Json doc = AgentRoster::defaults().to_json();
        doc["agents"][0].erase("role");
        std::string error;
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "agent entry missing \"role\"");

        doc = AgentRoster::defaults().to_json();
        doc["agents"][0]["role"] = "dungeon_master";
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "unknown agent role \"dungeon_master\"");
    }

    SUBCASE("anxiety and persona must be non-empty") {
        Json doc = AgentRoster::defaults().to_json();
        doc["agents"][0]["anxiety"] = "";
        std::string error;
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "mechanics_architect: \"anxiety\" must be a non-empty string");

        doc = AgentRoster::defaults().to_json();
        doc["agents"][3].erase("persona");
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "balance_critic: \"persona\" must be a non-empty string");
    }

    SUBCASE("owned fields must be strings") {
        Json doc = AgentRoster::defaults().to_json();
        doc["agents"][0]["owned_fields"] = "players";
        std::string error;
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "mechanics_architect: \"owned_fields\" must be an array");

        doc = AgentRoster::defaults().to_json();
        doc["agents"][0]["owned_fields"] = Json::array({"players", 7});
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "mechanics_architect: owned field names must be strings");
    }

    SUBCASE("all five roles are mandatory") {
        Json doc = AgentRoster::defaults().to_json();
        doc["agents"].erase(4);
        std::string error;
        CHECK_FALSE(AgentRoster::from_json(doc, &error).has_value());
        CHECK(error == "roster missing fun_factor_judge");
    }

    SUBCASE("load reports unreadable files") {
        std::string error;
        CHECK_FALSE(AgentRoster::load("/nonexistent/roster.json", &error).has_value());
        CHECK_FALSE(error.empty());
    }
}

TEST_CASE("critique documents are checked field by field") {
    SUBCASE("a complete critique passes and converts") {
        const Json doc = critique_json("severe");
        CHECK(check_critique_document(doc).empty());
        const CritiqueReport report = critique_from_json(doc);
        REQUIRE(report.issues.size() == 1);
        CHECK(report.issues[0].severity == validation::Severity::severe);
        CHECK(report.issues[0].description ==
              "Runaway leader: an early nutrient engine snowballs unchecked");
        REQUIRE(report.recommendations.size() == 1);
        REQUIRE(report.exploits.size() == 1);
        CHECK(report.needs_refinement());
    }

    SUBCASE("only minor issues do not trigger refinement") {
        CritiqueReport report = critique_from_json(critique_json("minor"));
        CHECK_FALSE(report.needs_refinement());
        report.issues.push_back({"Pacing drags in the midgame", validation::Severity::moderate});
        CHECK(report.needs_refinement());
        CHECK_FALSE(CritiqueReport{}.needs_refinement());
    }

    SUBCASE("shape violations name the offending field") {
        CHECK(check_critique_document(Json::array()) ==
              std::vector<std::string>{"critique must be a JSON object"});

        Json doc = critique_json("minor");
        doc.erase("issues");
        auto problems = check_critique_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"issues\" must be an array");

        doc = critique_json("minor");
        doc["issues"][0]["description"] = "";
        problems = check_critique_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "each issue needs a non-empty \"description\"");

        doc = critique_json("minor");
        doc["issues"][0]["severity"] = "catastrophic";
        problems = check_critique_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "each issue needs a \"severity\" of minor, moderate, or severe");

        doc = critique_json("minor");
        doc["recommendations"] = "fix it";
        problems = check_critique_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"recommendations\" must be an array of strings");

        doc = critique_json("minor");
        doc.erase("exploits");
        problems = check_critique_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"exploits\" must be an array of strings");
    }

    SUBCASE("critique JSON round-trips") {
        const CritiqueReport report = critique_from_json(critique_json("moderate"));
        const Json round = report.to_json();
        CHECK(check_critique_document(round).empty());
        CHECK(round["issues"][0]["severity"] == "moderate");
    }
}

TEST_CASE("assessment documents are checked field by field") {
    SUBCASE("a complete assessment passes and converts") {
        const Json doc = assessment_json(7);
        CHECK(check_assessment_document(doc).empty());
        const FunAssessment assessment = assessment_from_json(doc);
        CHECK(assessment.fun_rating == 7);
        CHECK(assessment.replayability_notes ==
              "Chamber layouts and event order reshuffle every session");
        REQUIRE(assessment.engagement_hooks.size() == 1);
        CHECK(check_assessment_document(assessment.to_json()).empty());
    }

    SUBCASE("ratings outside 1..10 are rejected, not clamped") {
        for (int rating : {0, 11, -3, 42}) {
            Json doc = assessment_json(5);
            doc["fun_rating"] = rating;
            const auto problems = check_assessment_document(doc);
            REQUIRE(problems.size() == 1);
            CHECK(problems[0] == "\"fun_rating\" must be between 1 and 10");
        }
        for (int rating : {1, 10}) {
            Json doc = assessment_json(5);
            doc["fun_rating"] = rating;
            CHECK(check_assessment_document(doc).empty());
        }
    }

    SUBCASE("non-integer ratings are rejected") {
        Json doc = assessment_json(5);
        doc["fun_rating"] = 7.5;
        auto problems = check_assessment_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"fun_rating\" must be an integer");

        doc["fun_rating"] = "7";
        problems = check_assessment_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"fun_rating\" must be an integer");
    }

    SUBCASE("shape violations name the offending field") {
        CHECK(check_assessment_document(Json("prose")) ==
              std::vector<std::string>{"assessment must be a JSON object"});

        Json doc = assessment_json(5);
        doc["tension_moments"] = Json::array({"fine", 3});
        auto problems = check_assessment_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"tension_moments\" must be an array of strings");

        doc = assessment_json(5);
        doc["replayability_notes"] = "";
        problems = check_assessment_document(doc);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0] == "\"replayability_notes\" must be a non-empty string");
    }
}

TEST_CASE("critic catalogs advertise their schemas") {
    const std::string critique = generation::render_field_catalog(critique_catalog());
    CHECK(critique.find("issues[].severity") != std::string::npos);
    CHECK(critique.find("minor, moderate, severe") != std::string::npos);
    const std::string assessment = generation::render_field_catalog(assessment_catalog());
    CHECK(assessment.find("fun_rating") != std::string::npos);
    CHECK(assessment.find("integer 1-10") != std::string::npos);
}

TEST_CASE("five-agent pipeline") {
    const AgentRoster roster = AgentRoster::defaults();
    const auto registry = validation::RuleRegistry::extended();
    const std::string theme = "Bioluminescent fungi spreading through a cave ecosystem";
    const std::string constraints = "2-4 players, cooperative, medium complexity";

    const GameDesign base = cave_design();
    const Json full = design_to_json(base);
    const Json arch_doc = stage_doc(roster, AgentRole::mechanics_architect, full);
    const Json weaver_doc = stage_doc(roster, AgentRole::theme_weaver, full);
    const Json comp_doc = stage_doc(roster, AgentRole::component_designer, full);

    SUBCASE("a severe critique triggers one refinement and a judge re-run") {
        GameDesign refined = base;
        refined.title = "Mycelium: The Deep";
        refined.setup =
            "Place the entry chamber, seed three nutrient pools, deal two growth cards "
            "each, then post the Network Synergy rule beside the board";
        const Json refined_full = design_to_json(refined);

        std::string script;
        script += script_line(fenced(arch_doc), "", 100, 40);
        script += script_line(fenced(weaver_doc), "", 60, 20);
        script += script_line(fenced(comp_doc), "", 50, 30);
        script += script_line(fenced(critique_json("severe")), kCriticRoute, 80, 25);
        script += script_line(fenced(assessment_json(5)), kJudgeRoute, 70, 15);
        script += script_line(fenced(refined_full), kRefineRoute, 120, 90);
        script += script_line(fenced(assessment_json(7)), kJudgeRoute, 75, 18);

        generation::MockTransport mock;
        std::string error;
        REQUIRE_MESSAGE(mock.load_script_text(script, &error), error);

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(3), mock, roster, registry);
        REQUIRE_MESSAGE(run.ok(), run.error);
        CHECK(run.refined);
        CHECK(run.fun_rating() == 7);
        REQUIRE(run.final_design.has_value());
        CHECK(run.final_design->title == "Mycelium: The Deep");
        CHECK(design_to_json(*run.final_design) == refined_full);

        REQUIRE(run.critique.has_value());
        CHECK(run.critique->needs_refinement());
        REQUIRE(run.critique->issues.size() == 1);
        CHECK(run.critique->issues[0].severity == validation::Severity::severe);

        REQUIRE(run.stage_outputs.size() == 4);
        CHECK(run.stage_outputs[0].first == "mechanics_architect");
        CHECK(run.stage_outputs[1].first == "theme_weaver");
        CHECK(run.stage_outputs[2].first == "component_designer");
        CHECK(run.stage_outputs[3].first == "refinement");
        CHECK(run.stage_outputs[0].second == arch_doc);
        CHECK(run.stage_outputs[3].second == refined_full);

        CHECK(run.prompt_tokens == 100 + 60 + 50 + 80 + 70 + 120 + 75);
        CHECK(run.completion_tokens == 40 + 20 + 30 + 25 + 15 + 90 + 18);
        CHECK(run.total_tokens() == 793);
        CHECK_FALSE(run.tokens_estimated);

        const auto requests = mock.requests();
        REQUIRE(requests.size() == 7);
        const std::string architect_prompt = flatten(requests[0]);
        CHECK(architect_prompt.find("design_precedents") == std::string::npos);
        CHECK(flatten(requests[1]).find("current_design") != std::string::npos);
        CHECK(flatten(requests[2]).find("current_design") != std::string::npos);

        bool saw_refinement_prompt = false;
        for (const auto& request : requests) {
            const std::string text = flatten(request);
            if (text.find(kRefineRoute) == std::string::npos) continue;
            saw_refinement_prompt = true;
            CHECK(text.find("- [severe] Runaway leader") != std::string::npos);
            CHECK(text.find("Recommendations:") != std::string::npos);
            CHECK(text.find("Exploits:") != std::string::npos);
            CHECK(text.find("The design under refinement") != std::string::npos);
        }
        CHECK(saw_refinement_prompt);

        const Json record = run.to_json();
        CHECK(record["refined"] == true);
        CHECK(record["total_tokens"] == 793);
        CHECK(record["assessment"]["fun_rating"] == 7);
        CHECK(record["stage_outputs"].contains("refinement"));
        CHECK_FALSE(record.contains("error"));
    }

    SUBCASE("a minor critique skips refinement and keeps the first assessment") {
        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(weaver_doc));
        mock.push_response(fenced(comp_doc));
        mock.push_response(fenced(critique_json("minor")), kCriticRoute);
        mock.push_response(fenced(assessment_json(5)), kJudgeRoute);

        const std::string precedents =
            "Design precedents from published games:\n"
            "1. Root (players 2-4): woodland factions vie for territory control";
        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(3), mock, roster, registry, precedents);
        REQUIRE_MESSAGE(run.ok(), run.error);
        CHECK_FALSE(run.refined);
        CHECK(run.fun_rating() == 5);
        CHECK(run.stage_outputs.size() == 3);
        CHECK(design_to_json(*run.final_design) == full);

        const auto requests = mock.requests();
        REQUIRE(requests.size() == 5);
        const std::string architect_prompt = flatten(requests[0]);
        CHECK(architect_prompt.find("design_precedents") != std::string::npos);
        CHECK(architect_prompt.find("woodland factions") != std::string::npos);
        CHECK(flatten(requests[1]).find("design_precedents") == std::string::npos);
        CHECK(flatten(requests[2]).find("design_precedents") == std::string::npos);
    }

    SUBCASE("merging honors field ownership") {
        Json hijacking = weaver_doc;
        hijacking["goal"] = "Hijacked goal that is plenty long for the parser to accept";

        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(hijacking));
        mock.push_response(fenced(comp_doc));
        mock.push_response(fenced(critique_json("minor")), kCriticRoute);
        mock.push_response(fenced(assessment_json(6)), kJudgeRoute);

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(3), mock, roster, registry);
        REQUIRE_MESSAGE(run.ok(), run.error);
        CHECK(run.final_design->goal == base.goal);
        // The stage record keeps the raw document; the merge is what filters.
        CHECK(run.stage_outputs[1].second.contains("goal"));
    }

    SUBCASE("component stage retries until the merged design validates") {
        GameDesign decked = base;
        decked.primary_mechanisms = {MechanismKind::deck_building,
                                     MechanismKind::resource_management,
                                     MechanismKind::area_control};
        const Json decked_full = design_to_json(decked);
        Json cardless = stage_doc(roster, AgentRole::component_designer, decked_full);
        cardless["components"]["card_types"] = Json::array();

        generation::MockTransport mock;
        mock.push_response(fenced(stage_doc(roster, AgentRole::mechanics_architect, decked_full)));
        mock.push_response(fenced(stage_doc(roster, AgentRole::theme_weaver, decked_full)));
        mock.push_response(fenced(cardless));
        mock.push_response(fenced(stage_doc(roster, AgentRole::component_designer, decked_full)));
        mock.push_response(fenced(critique_json("minor")), kCriticRoute);
        mock.push_response(fenced(assessment_json(6)), kJudgeRoute);

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(3), mock, roster, registry);
        REQUIRE_MESSAGE(run.ok(), run.error);
        CHECK(design_to_json(*run.final_design) == decked_full);

        const auto requests = mock.requests();
        REQUIRE(requests.size() == 6);
        const std::string correction = flatten(requests[3]);
        CHECK(correction.find(generation::kCorrectionPrefix) != std::string::npos);
        CHECK(correction.find("Deck building needs cards") != std::string::npos);
    }

    SUBCASE("stage exhaustion aborts with a partial record") {
        Json incomplete = weaver_doc;
        incomplete.erase("setup");

        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(incomplete));
        mock.push_response(fenced(incomplete));

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(2), mock, roster, registry);
        CHECK_FALSE(run.ok());
        CHECK(run.error.rfind("theme_weaver: retries exhausted: ", 0) == 0);
        CHECK_FALSE(run.final_design.has_value());
        CHECK_FALSE(run.critique.has_value());
        CHECK_FALSE(run.assessment.has_value());
        REQUIRE(run.stage_outputs.size() == 1);
        CHECK(run.stage_outputs[0].first == "mechanics_architect");

        const Json record = run.to_json();
        CHECK(record.contains("error"));
        CHECK(record["final_design"].is_null());
    }

    SUBCASE("critic retry exhaustion is attributed to the critic") {
        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(weaver_doc));
        mock.push_response(fenced(comp_doc));
        mock.push_response("No structured output, just vibes.", kCriticRoute);
        mock.push_response("Still no JSON.", kCriticRoute);
        mock.push_response(fenced(assessment_json(8)), kJudgeRoute);

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(2), mock, roster, registry);
        CHECK_FALSE(run.ok());
        CHECK(run.error == "balance_critic: retries exhausted: response contained no JSON object");
        CHECK(run.final_design.has_value());
        CHECK_FALSE(run.critique.has_value());
        CHECK_FALSE(run.assessment.has_value());
    }

    SUBCASE("judge retry exhaustion is attributed to the judge") {
        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(weaver_doc));
        mock.push_response(fenced(comp_doc));
        mock.push_response(fenced(critique_json("minor")), kCriticRoute);
        mock.push_response("A delightful romp.", kJudgeRoute);
        mock.push_response("Ten out of ten, no notes.", kJudgeRoute);

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(2), mock, roster, registry);
        CHECK_FALSE(run.ok());
        CHECK(run.error ==
              "fun_factor_judge: retries exhausted: response contained no JSON object");
        CHECK(run.critique.has_value());
        CHECK_FALSE(run.assessment.has_value());
    }

    SUBCASE("post-refinement judge failure resets the assessment") {
        GameDesign refined = base;
        refined.title = "Mycelium: The Deep";
        const Json refined_full = design_to_json(refined);

        generation::MockTransport mock;
        mock.push_response(fenced(arch_doc));
        mock.push_response(fenced(weaver_doc));
        mock.push_response(fenced(comp_doc));
        mock.push_response(fenced(critique_json("severe")), kCriticRoute);
        mock.push_response(fenced(assessment_json(5)), kJudgeRoute);
        mock.push_response(fenced(refined_full), kRefineRoute);
        // No second judge line: the re-run exhausts the script.

        const PipelineRun run =
            run_pipeline(theme, constraints, test_config(1), mock, roster, registry);
        CHECK_FALSE(run.ok());
        CHECK(run.error ==
              "fun_factor_judge (post-refinement): retries exhausted: "
              "transport error: mock script exhausted");
        CHECK(run.refined);
        CHECK_FALSE(run.assessment.has_value());
        CHECK(run.fun_rating() == 0);
        REQUIRE(run.final_design.has_value());
        CHECK(run.final_design->title == "Mycelium: The Deep");
    }
}

TEST_CASE("single-agent ablation conditions") {
    const auto registry = validation::RuleRegistry::extended();
    const std::string theme = "Rival lighthouse keepers guiding ships through fog";
    const std::string constraints = "2-4 players, competitive, 45-60 minutes";

    SUBCASE("condition tokens round-trip") {
        for (Condition condition : {Condition::C1, Condition::C2, Condition::C3, Condition::C4}) {
            const auto parsed = condition_from_string(to_string(condition));
            REQUIRE(parsed.has_value());
            CHECK(*parsed == condition);
        }
        CHECK(condition_from_string("c2") == Condition::C2);
        CHECK_FALSE(condition_from_string("C5").has_value());
        CHECK_FALSE(condition_from_string("").has_value());
    }

    SUBCASE("the shared design signature uses the designer persona") {
        const generation::Signature sig =
            design_signature(theme, constraints, generation::ReasoningMode::direct);
        CHECK(sig.persona == designer_persona());
        CHECK(sig.persona.find("expert tabletop game designer") != std::string::npos);
        REQUIRE(sig.inputs.size() == 2);
        CHECK(sig.inputs[0].name == "theme");
        CHECK(sig.inputs[1].name == "design_constraints");
        CHECK(sig.output_catalog.fields.size() == field_catalog().fields.size());
    }

    SUBCASE("C1 makes exactly one free-text call") {
        generation::MockTransport mock;
        std::string error;
        REQUIRE(mock.load_script_text(
            script_line("A fog-shrouded bidding game where keepers auction beam time.", "", 30, 12),
            &error));

        const generation::GenerationOutcome outcome =
            single_agent_generate(theme, constraints, test_config(3), mock, Condition::C1,
                                  registry);
        CHECK(outcome.error.empty());
        CHECK_FALSE(outcome.design.has_value());
        REQUIRE(outcome.attempts.size() == 1);
        CHECK(outcome.attempts[0].raw_response ==
              "A fog-shrouded bidding game where keepers auction beam time.");
        CHECK_FALSE(outcome.attempts[0].failure.has_value());
        CHECK(outcome.prompt_tokens == 30);
        CHECK(outcome.completion_tokens == 12);
        CHECK_FALSE(outcome.tokens_estimated);

        const auto requests = mock.requests();
        REQUIRE(requests.size() == 1);
        REQUIRE(requests[0].size() == 1);
        CHECK(requests[0][0].role == "user");
        const std::string expected =
            designer_persona() +
            "\n\nInputs:\n"
            "- theme (Thematic concept for the game): " + theme + "\n"
            "- design_constraints (Player count, complexity, time): " + constraints + "\n" +
            "\nDescribe the complete game design.\n";
        CHECK(requests[0][0].content == expected);
    }

    SUBCASE("C1 surfaces transport failures without retrying") {
        generation::MockTransport mock;
        const generation::GenerationOutcome outcome =
            single_agent_generate(theme, constraints, test_config(3), mock, Condition::C1,
                                  registry);
        CHECK(outcome.error == "transport error: mock script exhausted");
        REQUIRE(outcome.attempts.size() == 1);
        CHECK(outcome.attempts[0].raw_response.empty());
        CHECK(outcome.attempts[0].failure == outcome.error);
        CHECK(mock.requests().size() == 1);
    }

    SUBCASE("C2 retries parse failures but accepts rule violations") {
        std::mt19937_64 rng(7);
        const GameDesign valid = ggtest::make_valid_design(rng);
        GameDesign broken = valid;
        broken.goal = "Win.";

        generation::MockTransport mock;
        mock.push_response(fenced(design_to_json(broken)));
        mock.push_response(fenced(design_to_json(valid)));

        generation::GenerationOutcome outcome =
            single_agent_generate(theme, constraints, test_config(3), mock, Condition::C2,
                                  registry);
        REQUIRE_MESSAGE(outcome.ok(), outcome.error);
        CHECK(design_to_json(*outcome.design) == design_to_json(valid));
        REQUIRE(outcome.attempts.size() == 2);
        REQUIRE(outcome.attempts[0].failure.has_value());
        CHECK(outcome.attempts[0].failure->find("goal") != std::string::npos);

        // A design that parses but breaks a mechanism rule sails through C2.
        GameDesign violating = cave_design();
        violating.primary_mechanisms = {MechanismKind::deck_building,
                                        MechanismKind::hidden_information};
        violating.components.card_types.clear();
        generation::MockTransport lenient;
        lenient.push_response(fenced(design_to_json(violating)));
        outcome = single_agent_generate(theme, constraints, test_config(3), lenient,
                                        Condition::C2, registry);
        REQUIRE_MESSAGE(outcome.ok(), outcome.error);
        CHECK(outcome.attempts.size() == 1);
        CHECK(validation::validate(*outcome.design, registry).consistency_errors == 1);
    }

    SUBCASE("C3 also retries registry violations") {
        GameDesign violating = cave_design();
        violating.primary_mechanisms = {MechanismKind::deck_building,
                                        MechanismKind::hidden_information};
        violating.components.card_types.clear();
        GameDesign fixed = violating;
        fixed.components.card_types = {{"signal cards", "order the beam auctions"}};

        generation::MockTransport mock;
        mock.push_response(fenced(design_to_json(violating)));
        mock.push_response(fenced(design_to_json(fixed)));

        const generation::GenerationOutcome outcome =
            single_agent_generate(theme, constraints, test_config(3), mock, Condition::C3,
                                  registry);
        REQUIRE_MESSAGE(outcome.ok(), outcome.error);
        REQUIRE(outcome.attempts.size() == 2);
        REQUIRE(outcome.attempts[0].failure.has_value());
        CHECK(outcome.attempts[0].failure->find("Deck building needs cards") !=
              std::string::npos);
        CHECK(validation::validate(*outcome.design, registry).consistency_errors == 0);

        const std::string correction = flatten(mock.requests()[1]);
        CHECK(correction.find("Deck building needs cards") != std::string::npos);
    }

    SUBCASE("C4 refuses the single-agent entry point") {
        generation::MockTransport mock;
        CHECK_THROWS_WITH_AS(
            single_agent_generate(theme, constraints, test_config(3), mock, Condition::C4,
                                  registry),
            "C4 is the full pipeline; call run_pipeline", std::invalid_argument);
    }
}

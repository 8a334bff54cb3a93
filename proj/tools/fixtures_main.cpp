// Regenerates the static fixtures under data/ from the library itself:
// reference game encodings, the retrieval corpus, default agent/rule/rubric
// files, study plans, and the mock pipeline transcript. Every encoded design
// is validated before writing, so a fixture that would fail the checker
// aborts regeneration instead of landing in the tree.
//
//   ./build/gamegrammar_fixtures data

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gamegrammar/agents.hpp"
#include "gamegrammar/coach.hpp"
#include "gamegrammar/config.hpp"
#include "gamegrammar/ontology.hpp"
#include "gamegrammar/validation.hpp"

namespace fs = std::filesystem;
using namespace gg;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        std::exit(1);
    }
    out << content;
}

// ---------------------------------------------------------------------------
// Reference roster
// ---------------------------------------------------------------------------

struct RosterEntry {
    std::string id;
    std::string name;
    int year = 0;
    std::string tier;  // light, medium, heavy
    std::vector<MechanismKind> mechanisms;
    std::string description;
    int min_players = 1;
    int max_players = 1;
    double weight = 1.0;
};

using MK = MechanismKind;

const std::vector<RosterEntry>& roster_entries() {
    static const std::vector<RosterEntry> kEntries = {
        {"azul", "Azul", 2017, "light", {MK::set_collection},
         "Drafting painted tiles to complete wall patterns for points", 2, 4, 1.8},
        {"codenames", "Codenames", 2015, "light", {MK::hidden_information},
         "Teams guess agent words from one-word spymaster clues", 2, 8, 1.3},
        {"kingdomino", "Kingdomino", 2016, "light", {MK::set_collection, MK::area_control},
         "Draft dominoes to grow a five by five kingdom grid", 2, 4, 1.2},
        {"love-letter", "Love Letter", 2012, "light", {MK::hidden_information},
         "Tiny deduction duel of courtly messengers and bluffing", 2, 4, 1.2},
        {"splendor", "Splendor", 2014, "light",
         {MK::engine_building, MK::set_collection, MK::resource_management},
         "Chip-collecting engine of gem mines and noble visits", 2, 4, 1.8},
        {"seven-wonders", "7 Wonders", 2010, "medium",
         {MK::set_collection, MK::resource_management},
         "Simultaneous card drafting across three ages of civilization", 2, 7, 2.3},
        {"catan", "Catan", 1995, "medium",
         {MK::resource_management, MK::set_collection, MK::hidden_information},
         "Settlers trade and build across a hexagonal island of scarce resources", 3, 4, 2.3},
        {"concordia", "Concordia", 2013, "medium",
         {MK::deck_building, MK::resource_management, MK::area_control},
         "Roman merchants spread colonists along Mediterranean trade networks", 2, 5, 3.0},
        {"dune-imperium", "Dune: Imperium", 2020, "medium",
         {MK::deck_building, MK::worker_placement, MK::resource_management},
         "Deck building meets worker placement in the politics of Arrakis", 1, 4, 3.0},
        {"everdell", "Everdell", 2018, "medium",
         {MK::worker_placement, MK::engine_building, MK::set_collection},
         "Woodland critters build a tableau city through the seasons", 1, 4, 2.8},
        {"root", "Root", 2018, "medium",
         {MK::area_control, MK::action_points, MK::hidden_information},
         "Asymmetric woodland factions contest clearings for points", 2, 4, 3.7},
        {"spirit-island", "Spirit Island", 2017, "medium",
         {MK::area_control, MK::engine_building, MK::action_points},
         "Cooperative spirits repel colonizing invaders from their island", 1, 4, 4.0},
        {"terraforming-mars", "Terraforming Mars", 2016, "medium",
         {MK::engine_building, MK::resource_management, MK::area_control},
         "Corporations race to warm Mars with engine-building project cards", 1, 5, 3.2},
        {"ticket-to-ride", "Ticket to Ride", 2004, "medium",
         {MK::set_collection, MK::hidden_information},
         "Collect colored card sets to claim railway routes across a map", 2, 5, 1.8},
        {"wingspan", "Wingspan", 2019, "medium",
         {MK::engine_building, MK::set_collection, MK::resource_management},
         "Engine building with birds across forest, grassland, and wetland", 1, 5, 2.4},
        {"brass-birmingham", "Brass: Birmingham", 2018, "heavy",
         {MK::resource_management, MK::area_control, MK::engine_building},
         "Industrial-era network building and market economics in the Midlands", 2, 4, 3.9},
        {"gaia-project", "Gaia Project", 2017, "heavy",
         {MK::area_control, MK::engine_building, MK::resource_management},
         "Asymmetric space factions terraform planets and grow federations", 1, 4, 4.4},
        {"gloomhaven", "Gloomhaven", 2017, "heavy", {MK::deck_building, MK::action_points},
         "Campaign dungeon crawl with card-driven tactical combat", 1, 4, 3.9},
        {"through-the-ages", "Through the Ages", 2015, "heavy",
         {MK::engine_building, MK::resource_management, MK::action_points},
         "Civilization building through card rows and a tight internal economy", 2, 4, 4.4},
        {"twilight-imperium-4e", "Twilight Imperium 4E", 2017, "heavy",
         {MK::area_control, MK::action_points, MK::hidden_information},
         "Epic space opera of politics, trade, and galactic ambition", 3, 6, 4.3},
    };
    return kEntries;
}

Json mechanisms_json(const std::vector<MechanismKind>& mechanisms) {
    Json arr = Json::array();
    for (const auto kind : mechanisms) arr.push_back(to_string(kind));
    return arr;
}

// ---------------------------------------------------------------------------
// Full encodings for the five ontology reference games
// ---------------------------------------------------------------------------

GameDesign catan() {
    GameDesign d;
    d.title = "Catan";
    d.theme = "Settlers developing an uncharted island of scarce, dice-driven resources";
    d.game_type = GameType::competitive;
    d.goal = "Be the first to reach ten victory points from settlements, cities, and development cards";
    d.end_condition = "Game ends the moment a player shows ten victory points on their own turn";
    d.primary_mechanisms = {MK::resource_management, MK::set_collection, MK::hidden_information};
    d.turn_structure =
        "Roll for island-wide production, trade with rivals or the bank, then build roads, "
        "settlements, cities, or development cards";
    d.uncertainty_source = "dice-driven resource production and a shuffled development deck";
    d.core_loop =
        "Collect resource cards from dice rolls, trade surpluses, and spend matched sets on "
        "expansion toward ten points";
    d.strategic_depth =
        "Placement around scarce number tiles and port access decides long-run production races";
    d.components.board_description =
        "Nineteen hexagonal terrain tiles ringed by harbor pieces, assembled into a variable "
        "island";
    d.components.card_types = {{"resource cards", "currency for every build"},
                               {"development cards", "hidden points and surprise effects"}};
    d.components.tokens = {{"settlements and cities", "mark production claims on the map"},
                           {"roads", "connect expansion routes"},
                           {"number tokens", "bind hexes to dice results"},
                           {"robber pawn", "blocks one hex's production"}};
    d.components.other_components = {"two six-sided dice"};
    d.players.min_players = 3;
    d.players.max_players = 4;
    d.players.interaction_style = "trading and negotiation over shared resource markets";
    d.setup =
        "Assemble the island, place number tokens in the spiral pattern, and give each player "
        "two starting settlements with adjoining roads";
    return d;
}

GameDesign root_game() {
    GameDesign d;
    d.title = "Root";
    d.theme = "Asymmetric woodland factions pursuing incompatible agendas in a shared forest";
    d.game_type = GameType::competitive;
    d.goal =
        "Score thirty victory points by advancing your faction's asymmetric agenda across the "
        "woodland";
    d.end_condition =
        "Game ends immediately when a faction reaches thirty points or completes a dominance "
        "card";
    d.primary_mechanisms = {MK::area_control, MK::action_points, MK::hidden_information};
    d.turn_structure =
        "Birdsong, daylight, and evening phases whose available actions differ by faction";
    d.uncertainty_source = "a shared deck of multi-use cards drawn into hidden hands";
    d.core_loop =
        "Spend faction actions to rule clearings, craft items, and convert board presence into "
        "points";
    d.strategic_depth =
        "Reading which faction is ahead and throttling them while still advancing your own "
        "engine";
    d.components.board_description =
        "A woodland map of twelve clearings joined by paths and rivers";
    d.components.card_types = {{"shared deck cards", "multi-use: craft, ambush, or dominance"},
                               {"faction cards", "asymmetric powers and turn reminders"}};
    d.components.tokens = {{"warrior meeples", "project force in clearings"},
                           {"building pieces", "anchor each faction's engine"},
                           {"victory point markers", "track the race to thirty"}};
    d.players.min_players = 2;
    d.players.max_players = 4;
    d.players.interaction_style = "asymmetric factions contesting shared clearings";
    d.players.roles = {"Marquise de Cat", "Eyrie Dynasties", "Woodland Alliance", "Vagabond"};
    d.setup =
        "Each faction sets up per its board: the Cats fill the woodland, the Eyrie roost in one "
        "corner, the Alliance seeds sympathy";
    return d;
}

GameDesign dune_imperium() {
    GameDesign d;
    d.title = "Dune: Imperium";
    d.theme = "Great houses maneuvering for spice, influence, and military position on Arrakis";
    d.game_type = GameType::competitive;
    d.goal = "Reach ten victory points through faction alliances, intrigue, and the spice economy";
    d.end_condition = "Game ends after the round in which any player holds ten victory points";
    d.primary_mechanisms = {MK::deck_building, MK::worker_placement, MK::resource_management};
    d.turn_structure =
        "Alternate sending agents to board spaces, then reveal remaining hands for buying power "
        "and combat strength";
    d.uncertainty_source = "a personal deck thinned and grown from a shared market row";
    d.core_loop =
        "Send agents to gather spice, water, and troops, buy better cards, and commit strength "
        "to each round's conflict";
    d.strategic_depth =
        "Balancing deck quality against board tempo while timing pushes for conflict rewards";
    d.components.board_description =
        "An Arrakis locations board with agent spaces for factions, trade, and battle";
    d.components.card_types = {
        {"starter and market cards", "define each turn's agent icons and buying power"},
        {"intrigue cards", "hidden combat and endgame tricks"}};
    d.components.tokens = {{"agent pawns", "workers placed on location spaces"},
                           {"spice, water, and solari tokens", "the three currencies"},
                           {"troop cubes", "strength committed to the conflict"}};
    d.players.min_players = 1;
    d.players.max_players = 4;
    d.players.interaction_style = "racing for contested board spaces and conflict rewards";
    d.setup =
        "Seed the market row, give each player an identical starter deck, two agents, and one "
        "water";
    return d;
}

GameDesign terraforming_mars() {
    GameDesign d;
    d.title = "Terraforming Mars";
    d.theme = "Rival corporations engineering a breathable Mars over generations";
    d.game_type = GameType::competitive;
    d.goal =
        "Finish with the highest terraform rating plus points from cards, cities, and greenery";
    d.end_condition =
        "Game ends at the close of the generation in which oxygen, temperature, and oceans all "
        "reach their caps";
    d.primary_mechanisms = {MK::engine_building, MK::resource_management, MK::area_control};
    d.turn_structure = "Generations alternate card drafting, action rounds, and production phases";
    d.uncertainty_source = "a vast shuffled project deck drafted generation by generation";
    d.core_loop =
        "Buy project cards, build production, raise the global parameters, and place tiles for "
        "points";
    d.strategic_depth =
        "Sequencing engine pieces against a shared clock that rewards early parameter pushes";
    d.components.board_description =
        "A hex map of Mars where ocean, greenery, and city tiles claim territory";
    d.components.card_types = {{"project cards", "engine pieces with tags and requirements"},
                               {"corporation cards", "asymmetric starting engines"}};
    d.components.tokens = {
        {"resource cubes", "track steel, titanium, plants, energy, and heat"},
        {"player markers", "ownership of tiles and track steps"},
        {"ocean, greenery, and city tiles", "terraforming progress on the map"}};
    d.players.min_players = 1;
    d.players.max_players = 5;
    d.players.interaction_style = "parallel engine races with light blocking on the map";
    d.setup =
        "Choose corporations, buy an opening hand, and set the three global parameter tracks to "
        "their minimums";
    return d;
}

GameDesign ticket_to_ride() {
    GameDesign d;
    d.title = "Ticket to Ride";
    d.theme = "Turn-of-the-century railway barons linking cities across North America";
    d.game_type = GameType::competitive;
    d.goal = "Score the most points from claimed routes and completed destination tickets";
    d.end_condition = "Final round triggers when any player's train supply drops to two or fewer";
    d.primary_mechanisms = {MK::set_collection, MK::hidden_information};
    d.turn_structure = "Draw train cards, claim a route with a matched set, or draw new tickets";
    d.uncertainty_source = "shuffled train and ticket decks behind an open market row";
    d.core_loop =
        "Collect colored train card sets and spend them to claim the routes your tickets need";
    d.strategic_depth =
        "Timing claims before rivals cut the map while extra cards hide your intent";
    d.components.board_description =
        "A railway map of North America with colored routes between cities";
    d.components.card_types = {
        {"train cards", "colored sets spent to claim routes"},
        {"destination tickets", "hidden objectives worth points or penalties"}};
    d.components.tokens = {{"plastic trains", "mark claimed routes"},
                           {"scoring markers", "track points around the board edge"}};
    d.players.min_players = 2;
    d.players.max_players = 5;
    d.players.interaction_style = "racing for shared routes with hidden objectives";
    d.setup =
        "Deal four train cards and three tickets to each player and fill the open market with "
        "five face-up cards";
    return d;
}

// ---------------------------------------------------------------------------
// Mycelium case study: pre-refinement draft and refined final design
// ---------------------------------------------------------------------------

GameDesign mycelium(bool refined) {
    GameDesign d;
    d.title = "Mycelium: The Deep";
    d.theme = "Bioluminescent fungi competing for dominance in a deep cave ecosystem";
    d.game_type = GameType::cooperative;
    d.goal =
        "Grow the shared fungal network from the cave depths to the surface before the flood "
        "reaches the highest colony";
    d.end_condition =
        "Victory when a growth cube reaches the surface tile; defeat when the flood reaches the "
        "highest cube row";
    d.primary_mechanisms = {MK::resource_management, MK::area_control, MK::engine_building};
    d.turn_structure = "Place spores, reveal, grow, resolve an event, then the flood rises";
    d.components.board_description =
        "Thirty modular hex cave tiles assembled into a descending cavern map";
    d.components.card_types = {{"event cards", "cave hazards and windfalls"},
                               {"structure cards", "specialized fungal structures to build"},
                               {"objective cards", "optional colony milestones"}};
    d.components.tokens = {{"growth cubes", "sixty cubes marking the living network"},
                           {"spore tokens", "twelve tokens allocated each round"},
                           {"flood markers", "twenty markers tracking the rising water"}};
    d.players.min_players = 2;
    d.players.max_players = 4;
    d.players.roles = {"pioneer", "cultivator", "luminary"};
    d.players.interaction_style = "shared planning with role-differentiated actions";
    if (refined) {
        d.uncertainty_source =
            "event deck with predictable flood escalation every third card";
        d.core_loop =
            "Allocate spores, expand along nutrient pathways, build structures, and share "
            "growth through the Network Synergy rule";
        d.strategic_depth =
            "Network Synergy rewards connecting colonies, so teams weigh fast ascent against "
            "linking side chambers";
        d.setup =
            "Assemble the cave in five descending rows, place the flood marker on the lowest "
            "row, give each role its starting colony, and post the Network Synergy rule beside "
            "the board";
    } else {
        d.uncertainty_source = "event deck with flood cards struck at random intervals";
        d.core_loop =
            "Allocate spores, expand along nutrient pathways, build structures, and race the "
            "flood upward";
        d.strategic_depth =
            "Choosing which chambers to light first shapes the whole network's efficiency";
        d.setup =
            "Assemble the cave in five descending rows, place the flood marker on the lowest "
            "row, and give each role its starting colony";
    }
    return d;
}

// A design that parses cleanly but violates the deck-building contract.
GameDesign cardless_deck_builder() {
    GameDesign d;
    d.title = "Emberwake";
    d.theme = "Fire spirits rekindling a chain of dormant volcanoes";
    d.game_type = GameType::competitive;
    d.goal = "Ignite four volcano chambers before any rival spirit claims the caldera crown";
    d.end_condition = "Game ends when a spirit ignites its fourth chamber";
    d.primary_mechanisms = {MK::deck_building, MK::hidden_information};
    d.turn_structure = "Draw embers, play one gambit, then advance the lava track";
    d.uncertainty_source = "hidden gambit choices revealed simultaneously";
    d.core_loop = "Gather embers, upgrade your gambits, and push the lava toward your chambers";
    d.strategic_depth = "Committing embers early telegraphs your route to watchful rivals";
    d.components.board_description = "A ring of eight volcano chambers around a shared caldera";
    d.components.tokens = {{"ember tokens", "fuel for every gambit"},
                           {"lava markers", "progress along the track"}};
    d.players.min_players = 2;
    d.players.max_players = 4;
    d.players.interaction_style = "simultaneous hidden commitments";
    d.setup = "Seed each chamber with two embers and deal every spirit a starting screen";
    return d;
}

// ---------------------------------------------------------------------------
// Mock pipeline transcript
// ---------------------------------------------------------------------------

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

Json stage_doc(const agents::AgentRoster& roster, agents::AgentRole role, const Json& full) {
    Json doc = Json::object();
    for (const auto& field : roster.find(role)->owned_fields) doc[field] = full.at(field);
    return doc;
}

std::string mycelium_transcript() {
    const agents::AgentRoster roster = agents::AgentRoster::defaults();
    const Json draft = design_to_json(mycelium(false));
    const Json final_design = design_to_json(mycelium(true));

    Json critique;
    critique["issues"] = Json::array(
        {Json{{"description",
               "Runaway leader: the first colony to secure a nutrient junction compounds growth "
               "unchecked"},
              {"severity", "severe"}},
         Json{{"description",
               "Flood timing is arbitrary, so teams cannot plan descents around the rising "
               "water"},
              {"severity", "moderate"}}});
    critique["recommendations"] = Json::array(
        {"Add a Network Synergy rule that shares growth bonuses across connected colonies",
         "Make flood escalation predictable so the team can plan each descent"});
    critique["exploits"] =
        Json::array({"Hoard spores at the richest junction and starve the team's frontier"});

    auto assessment = [](int fun_rating) {
        Json doc;
        doc["engagement_hooks"] =
            Json::array({"watching the cave bloom with light", "role-specific growth tricks"});
        doc["tension_moments"] =
            Json::array({"flood cards revealed one row below the highest colony"});
        doc["satisfaction_sources"] =
            Json::array({"linking chambers into one glowing network"});
        doc["replayability_notes"] =
            "Modular cave rows and role combinations reshape every ascent";
        doc["fun_rating"] = fun_rating;
        return doc;
    };

    std::string script;
    script += script_line(
        fenced(stage_doc(roster, agents::AgentRole::mechanics_architect, draft)), "", 820, 310);
    script += script_line(fenced(stage_doc(roster, agents::AgentRole::theme_weaver, draft)), "",
                          940, 180);
    script += script_line(
        fenced(stage_doc(roster, agents::AgentRole::component_designer, draft)), "", 1010, 240);
    script += script_line(fenced(critique), "You are the Balance Critic", 1380, 260);
    script += script_line(fenced(assessment(5)), "You are the Fun Factor Judge", 1390, 210);
    script += script_line(fenced(final_design), "You are the refinement agent", 1650, 520);
    script += script_line(fenced(assessment(7)), "You are the Fun Factor Judge", 1430, 205);
    return script;
}

// ---------------------------------------------------------------------------

void write_design(const fs::path& path, const GameDesign& design,
                  const validation::RuleRegistry& registry, int expected_issues) {
    const auto report = validation::validate(design, registry);
    if (static_cast<int>(report.issues.size()) != expected_issues) {
        std::cerr << design.title << ": expected " << expected_issues << " issues, got "
                  << report.issues.size() << "\n";
        for (const auto& issue : report.issues) std::cerr << "  " << issue.message << "\n";
        std::exit(1);
    }
    write_file(path, serialize_design(design));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gamegrammar_fixtures <data-dir>\n";
        return 2;
    }
    const fs::path data(argv[1]);
    const auto registry = validation::RuleRegistry::extended();

    // Defaults as editable config files.
    write_file(data / "agents.json", agents::AgentRoster::defaults().to_json().dump(2) + "\n");
    write_file(data / "rules.json", registry.to_json().dump(2) + "\n");
    write_file(data / "coach_rubrics.json",
               coach::CoachRubrics::defaults().to_json().dump(2) + "\n");

    // Full ontology encodings for the five reference games.
    write_design(data / "reference/games/catan.json", catan(), registry, 0);
    write_design(data / "reference/games/root.json", root_game(), registry, 0);
    write_design(data / "reference/games/dune-imperium.json", dune_imperium(), registry, 0);
    write_design(data / "reference/games/terraforming-mars.json", terraforming_mars(), registry,
                 0);
    write_design(data / "reference/games/ticket-to-ride.json", ticket_to_ride(), registry, 0);

    // Roster manifest: the twenty benchmark games, five of them fully encoded.
    Json manifest;
    manifest["reference_set"] = Json::array();
    for (const auto& entry : roster_entries()) {
        Json row;
        row["id"] = entry.id;
        row["name"] = entry.name;
        row["year"] = entry.year;
        row["tier"] = entry.tier;
        row["mechanisms"] = mechanisms_json(entry.mechanisms);
        row["min_players"] = entry.min_players;
        row["max_players"] = entry.max_players;
        row["weight"] = entry.weight;
        manifest["reference_set"].push_back(std::move(row));
    }
    manifest["encoded"] = Json::array(
        {"catan", "root", "dune-imperium", "terraforming-mars", "ticket-to-ride"});
    write_file(data / "reference/manifest.json", manifest.dump(2) + "\n");

    // Retrieval corpus over the same twenty games.
    std::string corpus = "gg-corpus-v1\n";
    for (const auto& entry : roster_entries()) {
        Json row;
        row["id"] = entry.id;
        row["name"] = entry.name;
        row["year"] = entry.year;
        row["mechanisms"] = mechanisms_json(entry.mechanisms);
        row["description"] = entry.description;
        row["min_players"] = entry.min_players;
        row["max_players"] = entry.max_players;
        row["weight"] = entry.weight;
        corpus += row.dump() + "\n";
    }
    write_file(data / "corpus_sample.jsonl", corpus);

    // Case-study fixtures.
    write_design(data / "fixtures/mycelium.json", mycelium(true), registry, 0);
    write_design(data / "fixtures/deck_building_no_cards.json", cardless_deck_builder(),
                 registry, 1);
    write_file(data / "fixtures/not_a_design.txt",
               "A cooperative game about bioluminescent fungi lighting a cave, described "
               "entirely in prose with no structured fields at all.\n");

    write_file(data / "mock/mycelium_pipeline.jsonl", mycelium_transcript());

    // Study plans.
    Json desk;
    desk["study"] = "ablation";
    desk["conditions"] = Json::array({"C1", "C2", "C3", "C4"});
    desk["prompts"] = Json::array(
        {Json{{"id", 1},
              {"theme", "Bioluminescent fungi competing in a cave ecosystem"},
              {"constraints", "2-4 players, competitive, medium complexity, 45-60 minutes"}},
         Json{{"id", 5},
              {"theme", "Deep sea divers recovering treasure from a sunken ship"},
              {"constraints", "2-4 players, cooperative, medium complexity, 45-60 minutes"}}});
    desk["replications"] = 2;
    desk["seed"] = 20250814;
    write_file(data / "plans/ablation_desk.json", desk.dump(2) + "\n");

    Json full_plan;
    full_plan["study"] = "ablation";
    full_plan["conditions"] = Json::array({"C1", "C2", "C3", "C4"});
    full_plan["replications"] = 3;
    full_plan["seed"] = 20250814;
    write_file(data / "plans/ablation_full.json", full_plan.dump(2) + "\n");

    Json rel_small;
    rel_small["study"] = "reliability";
    rel_small["designs_dir"] = "data/reference/games";
    rel_small["sessions"] = 3;
    rel_small["seed"] = 20250814;
    write_file(data / "plans/reliability_small.json", rel_small.dump(2) + "\n");

    Json rel_full = rel_small;
    rel_full["designs_dir"] = "runs/ablation/designs";
    rel_full["sessions"] = 5;
    write_file(data / "plans/reliability_full.json", rel_full.dump(2) + "\n");

    Json bench;
    bench["study"] = "benchmark";
    bench["reference_dir"] = "data/reference/games";
    bench["generated_dir"] = "runs/ablation/designs";
    bench["seed"] = 20250814;
    write_file(data / "plans/benchmark.json", bench.dump(2) + "\n");

    // Example application config pointing at the files above.
    AppConfig config = AppConfig::defaults();
    config.provider.endpoint_url = "https://api.example.com/v1/chat/completions";
    config.provider.model_id = "design-model";
    config.provider.api_key_env = "GG_API_KEY";
    config.evaluator.endpoint_url = "https://api.example.com/v1/chat/completions";
    config.evaluator.model_id = "coach-model";
    config.evaluator.api_key_env = "GG_API_KEY";
    config.corpus_path = "data/corpus_sample.jsonl";
    config.agent_spec_path = "data/agents.json";
    config.rule_registry_path = "data/rules.json";
    write_file(data / "config.example.json", config.to_json().dump(2) + "\n");

    std::cout << "fixtures written under " << data << "\n";
    return 0;
}

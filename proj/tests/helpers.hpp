#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gamegrammar/ontology.hpp"

namespace ggtest {

inline std::string data_dir() { return GG_DATA_DIR; }
inline std::string cli_bin() { return GG_CLI_BIN; }

// Random valid design. Components always include a board, cards, and tokens
// so every mechanism rule in the extended registry is satisfied, and the
// interaction style avoids the conflict lexicon; the result passes both
// parse_design and validate with zero issues by construction.
inline gg::GameDesign make_valid_design(std::mt19937_64& rng) {
    using gg::MechanismKind;
    auto pick = [&](const std::vector<std::string>& pool) {
        std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
        return pool[d(rng)];
    };

    static const std::vector<std::string> themes = {
        "Bioluminescent fungi spreading through a cave ecosystem",
        "Rival lighthouse keepers guiding ships through fog",
        "Beekeepers managing hives across a mountain valley",
        "Cartographers charting an archipelago of drifting islands",
        "Tide-pool creatures racing the incoming surf",
        "Clockmakers restoring a tower of gears and bells",
    };
    static const std::vector<std::string> goals = {
        "Accumulate the most renown by completing contracts before the season ends",
        "Grow your network across the map and connect three distant regions",
        "Collect matched sets of specimens while denying rivals key finds",
        "Build the most efficient production engine before supplies run out",
    };
    static const std::vector<std::string> ends = {
        "Game ends when the supply deck is exhausted",
        "Game ends after the eighth round concludes",
        "Ends when any player reaches twenty points",
    };
    static const std::vector<std::string> styles = {
        "indirect rivalry over shared spaces",
        "negotiation and trading between turns",
        "shared planning with individual execution",
        "parallel engine races with light blocking",
    };
    static const std::vector<std::string> turns = {
        "Draw, then take two actions, then refill the market",
        "Place one worker, resolve its space, pass clockwise",
        "Play a card, move, then score any completed sets",
    };
    static const std::vector<std::string> uncertainty = {
        "shuffled contract deck", "hidden objective cards", "dice-driven weather track",
        "random tile draws",
    };

    gg::GameDesign d;
    d.title = pick({"Gearfall", "Tidewatch", "Sporeline", "Lantern Reef", "Hivemind Valley",
                    "Foglight", "Driftmark", "Bellforge"});
    d.theme = pick(themes);
    std::uniform_int_distribution<int> type_dist(0, 2);
    d.game_type = static_cast<gg::GameType>(type_dist(rng));
    d.goal = pick(goals);
    d.end_condition = pick(ends);

    auto mechanisms = gg::all_mechanisms();
    std::shuffle(mechanisms.begin(), mechanisms.end(), rng);
    std::uniform_int_distribution<int> count_dist(2, 4);
    mechanisms.resize(count_dist(rng));
    d.primary_mechanisms = mechanisms;

    d.turn_structure = pick(turns);
    d.uncertainty_source = pick(uncertainty);

    d.components.board_description = "Modular hex map assembled from " +
                                     std::to_string(10 + type_dist(rng) * 5) + " tiles";
    d.components.card_types = {{"contract cards", "score objectives"},
                               {"event cards", "inject variability"}};
    d.components.tokens = {{"resource tokens", "track materials"},
                           {"marker tokens", "show control"}};
    if (type_dist(rng) == 0) d.components.other_components = {"cloth bag", "score pad"};

    std::uniform_int_distribution<int> min_dist(1, 3);
    d.players.min_players = min_dist(rng);
    std::uniform_int_distribution<int> span_dist(0, 3);
    d.players.max_players = d.players.min_players + span_dist(rng);
    if (d.game_type == gg::GameType::competitive && d.players.max_players < 2) {
        d.players.max_players = 2;
    }
    d.players.interaction_style = pick(styles);
    if (type_dist(rng) == 1) d.players.roles = {"navigator", "quartermaster"};

    d.setup = "Shuffle each deck, seed the market with four cards, give each player a " +
              pick({"starting hand", "home tile", "supply board"});
    d.core_loop = "Take actions to gather resources, convert them to progress, react to " +
                  pick({"events", "rivals", "the market"});
    d.strategic_depth = std::string("Timing conversions against the shared track ") +
                        "rewards planning several rounds ahead";
    return d;
}

}  // namespace ggtest

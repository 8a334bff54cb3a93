#include "doctest.h"
#include "gamegrammar/ontology.hpp"
#include "helpers.hpp"

#include <functional>
#include <random>

using namespace gg;

TEST_CASE("mechanism tokens round-trip and reject unknowns") {
    CHECK(all_mechanisms().size() == kMechanismCount);
    for (auto kind : all_mechanisms()) {
        auto back = mechanism_from_string(to_string(kind));
        REQUIRE(back.has_value());
        CHECK(*back == kind);
    }
    CHECK_FALSE(mechanism_from_string("worker-placement").has_value());
    CHECK_FALSE(mechanism_from_string("Deck_Building").has_value());
    CHECK_FALSE(mechanism_from_string("").has_value());
    CHECK(to_string(GameType::semi_cooperative) == "semi-cooperative");
    CHECK(game_type_from_string("semi-cooperative") == GameType::semi_cooperative);
    CHECK_FALSE(game_type_from_string("semi_cooperative").has_value());
}

TEST_CASE("text helpers count unicode scalars after trimming") {
    CHECK(trim_copy("  hello \n") == "hello");
    CHECK(trim_copy(" \t\r\n ") == "");
    CHECK(utf8_length("hello") == 5);
    CHECK(utf8_length("h\xC3\xA9llo") == 5);            // é is one scalar
    CHECK(utf8_length("\xE2\x82\xAC\xE2\x82\xAC") == 2);  // two euro signs
    CHECK(trimmed_length("  caf\xC3\xA9  ") == 4);
}

TEST_CASE("serialize/parse identity over 1000 random designs") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const GameDesign original = ggtest::make_valid_design(rng);
        const auto result = parse_design(serialize_design(original));
        REQUIRE_MESSAGE(result.ok(), result.failure.summary());
        CHECK(*result.design == original);
    }
}

TEST_CASE("parse failure kinds distinguish syntax, type, constraint") {
    CHECK(parse_design("not json at all").failure.kind == ParseFailure::Kind::syntax);
    CHECK(parse_design("[1,2,3]").failure.kind == ParseFailure::Kind::type);

    std::mt19937_64 rng(7);
    Json doc = design_to_json(ggtest::make_valid_design(rng));

    Json missing = doc;
    missing.erase("goal");
    auto r = parse_design_json(missing);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failure.kind == ParseFailure::Kind::type);

    Json short_goal = doc;
    short_goal["goal"] = "too short";
    r = parse_design_json(short_goal);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failure.kind == ParseFailure::Kind::constraint);
}

namespace {

// Returns the field paths reported when `mutate` is applied to a valid doc.
std::vector<std::string> corruption_paths(const Json& valid,
                                          const std::function<void(Json&)>& mutate) {
    Json doc = valid;
    mutate(doc);
    const auto result = parse_design_json(doc);
    REQUIRE_FALSE(result.ok());
    std::vector<std::string> paths;
    for (const auto& e : result.failure.errors) paths.push_back(e.field_path);
    return paths;
}

bool contains(const std::vector<std::string>& haystack, const std::string& needle) {
    return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

}  // namespace

TEST_CASE("single-field corruptions are rejected with the right field path") {
    std::mt19937_64 rng(99);
    const Json doc = design_to_json(ggtest::make_valid_design(rng));

    CHECK(contains(corruption_paths(doc, [](Json& d) { d["title"] = "   "; }), "title"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["theme"] = ""; }), "theme"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["game_type"] = "solo"; }),
                   "game_type"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["goal"] = "nineteen chars long"; }),
                   "goal"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["end_condition"] = "too brief"; }),
                   "end_condition"));
    CHECK(contains(corruption_paths(
                       doc, [](Json& d) { d["primary_mechanisms"] = {"deck_building"}; }),
                   "primary_mechanisms"));
    CHECK(contains(corruption_paths(doc,
                                    [](Json& d) {
                                        d["primary_mechanisms"] = {
                                            "deck_building", "area_control", "set_collection",
                                            "action_points", "worker_placement"};
                                    }),
                   "primary_mechanisms"));
    CHECK(contains(corruption_paths(doc,
                                    [](Json& d) {
                                        d["primary_mechanisms"] = {"deck_building",
                                                                   "deck_building"};
                                    }),
                   "primary_mechanisms[1]"));
    CHECK(contains(corruption_paths(doc,
                                    [](Json& d) {
                                        d["primary_mechanisms"] = {"deck_building",
                                                                   "dice_rolling"};
                                    }),
                   "primary_mechanisms[1]"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["players"]["min_players"] = 0; }),
                   "players.min_players"));
    CHECK(contains(corruption_paths(doc,
                                    [](Json& d) {
                                        d["players"]["min_players"] = 4;
                                        d["players"]["max_players"] = 2;
                                    }),
                   "players.max_players"));
    CHECK(contains(corruption_paths(doc,
                                    [](Json& d) { d["players"]["interaction_style"] = ""; }),
                   "players.interaction_style"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d["turn_structure"] = 17; }),
                   "turn_structure"));
    CHECK(contains(corruption_paths(
                       doc, [](Json& d) { d["components"]["card_types"] = {{{"name", ""}}}; }),
                   "components.card_types[0].name"));
    CHECK(contains(corruption_paths(doc, [](Json& d) { d.erase("setup"); }), "setup"));
}

TEST_CASE("goal length is counted in unicode scalars, not bytes") {
    std::mt19937_64 rng(3);
    Json doc = design_to_json(ggtest::make_valid_design(rng));
    const std::string e_acute = "\xC3\xA9";  // one scalar, two bytes
    std::string goal;
    for (int i = 0; i < 20; ++i) goal += e_acute;
    doc["goal"] = goal;  // 20 scalars, 40 bytes
    CHECK(parse_design_json(doc).ok());
    goal.resize(goal.size() - 2);  // drop one scalar
    doc["goal"] = goal;
    CHECK_FALSE(parse_design_json(doc).ok());
}

TEST_CASE("field catalog covers every leaf exactly once") {
    const auto& catalog = field_catalog();
    CHECK(catalog.fields.size() == 19);
    CHECK(required_document_fields().size() == 13);

    const auto* goal = catalog.find("goal");
    REQUIRE(goal != nullptr);
    CHECK(goal->min_length == 20);
    const auto* mechanisms = catalog.find("primary_mechanisms");
    REQUIRE(mechanisms != nullptr);
    CHECK(mechanisms->allowed_values.size() == kMechanismCount);
    CHECK(catalog.find("components.board_description") != nullptr);
    CHECK(catalog.find("no_such_field") == nullptr);

    const auto players = catalog.subset({"players"});
    CHECK(players.fields.size() == 4);
    for (const auto& f : players.fields) CHECK(f.field_path.starts_with("players"));

    // "title" must not drag in other fields by prefix accident.
    const auto title_only = catalog.subset({"title"});
    CHECK(title_only.fields.size() == 1);
}

TEST_CASE("check_document_fields validates partial documents") {
    Json partial = Json::object();
    partial["title"] = "Draft Game";
    partial["goal"] = "Collect more relics than any rival before dawn";
    auto check = check_document_fields(partial, {"title", "goal"});
    CHECK(check.ok());

    // Same document misses fields outside the requested subset.
    check = check_document_fields(partial, {"title", "theme"});
    CHECK_FALSE(check.ok());
    REQUIRE(check.type_errors.size() == 1);
    CHECK(check.type_errors[0].field_path == "theme");

    check = check_document_fields(Json::array(), {"title"});
    CHECK_FALSE(check.ok());
}

TEST_CASE("load_json_file reports unreadable and malformed input") {
    std::string error;
    CHECK(load_json_file("/nonexistent/nope.json", &error).is_discarded());
    CHECK_FALSE(error.empty());
}

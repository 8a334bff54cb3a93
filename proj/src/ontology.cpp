#include "gamegrammar/ontology.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace gg {

namespace {

constexpr int kGoalMinLength = 20;
constexpr int kEndConditionMinLength = 10;
constexpr int kMechanismMin = 2;
constexpr int kMechanismMax = 4;

constexpr std::array<const char*, kMechanismCount> kMechanismTokens = {
    "worker_placement", "action_points",   "deck_building",  "resource_management",
    "area_control",     "engine_building", "set_collection", "hidden_information",
};

constexpr std::array<const char*, 3> kGameTypeTokens = {
    "cooperative",
    "competitive",
    "semi-cooperative",
};

std::string allowed_mechanism_list() {
    std::string out;
    for (std::size_t i = 0; i < kMechanismTokens.size(); ++i) {
        if (i) out += ", ";
        out += kMechanismTokens[i];
    }
    return out;
}

}  // namespace

const std::vector<MechanismKind>& all_mechanisms() {
    static const std::vector<MechanismKind> kAll = {
        MechanismKind::worker_placement, MechanismKind::action_points,
        MechanismKind::deck_building,    MechanismKind::resource_management,
        MechanismKind::area_control,     MechanismKind::engine_building,
        MechanismKind::set_collection,   MechanismKind::hidden_information,
    };
    return kAll;
}

std::string to_string(MechanismKind kind) {
    return kMechanismTokens[static_cast<int>(kind)];
}

std::optional<MechanismKind> mechanism_from_string(std::string_view token) {
    for (int i = 0; i < kMechanismCount; ++i) {
        if (token == kMechanismTokens[i]) return static_cast<MechanismKind>(i);
    }
    return std::nullopt;
}

std::string to_string(GameType type) {
    return kGameTypeTokens[static_cast<int>(type)];
}

std::optional<GameType> game_type_from_string(std::string_view token) {
    for (int i = 0; i < 3; ++i) {
        if (token == kGameTypeTokens[i]) return static_cast<GameType>(i);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

std::string trim_copy(std::string_view text) {
    constexpr std::string_view ws = " \t\n\r\f\v";
    const auto begin = text.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = text.find_last_not_of(ws);
    return std::string(text.substr(begin, end - begin + 1));
}

std::size_t utf8_length(std::string_view text) {
    std::size_t count = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++count;  // skip continuation bytes
    }
    return count;
}

std::size_t trimmed_length(std::string_view text) {
    return utf8_length(trim_copy(text));
}

Json load_json_file(const std::string& path, std::string* error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (error) *error = "cannot open " + path;
        return Json::value_t::discarded;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Json doc = Json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded() && error) *error = path + " is not valid JSON";
    return doc;
}

// ---------------------------------------------------------------------------
// ParseFailure
// ---------------------------------------------------------------------------

std::string to_string(ParseFailure::Kind kind) {
    switch (kind) {
        case ParseFailure::Kind::syntax: return "syntax";
        case ParseFailure::Kind::type: return "type";
        case ParseFailure::Kind::constraint: return "constraint";
    }
    return "syntax";
}

std::vector<std::string> ParseFailure::messages() const {
    std::vector<std::string> out;
    out.reserve(errors.size());
    for (const auto& e : errors) {
        out.push_back(e.field_path.empty() ? e.message : e.field_path + ": " + e.message);
    }
    return out;
}

std::string ParseFailure::summary() const {
    std::string out = to_string(kind) + " failure";
    for (const auto& m : messages()) {
        out += "\n  " + m;
    }
    return out;
}

std::vector<std::string> FieldCheck::messages() const {
    std::vector<std::string> out;
    for (const auto& e : type_errors) out.push_back(e.field_path + ": " + e.message);
    for (const auto& e : constraint_errors) out.push_back(e.field_path + ": " + e.message);
    return out;
}

// ---------------------------------------------------------------------------
// Per-field parsing
// ---------------------------------------------------------------------------

namespace {

void add_type(FieldCheck& check, const std::string& path, std::string message) {
    check.type_errors.push_back({path, std::move(message)});
}

void add_constraint(FieldCheck& check, const std::string& path, std::string message) {
    check.constraint_errors.push_back({path, std::move(message)});
}

// Required text field with an optional minimum character count.
void parse_text(const Json& parent, const std::string& path, const char* key,
                std::size_t min_len, std::string& out, FieldCheck& check) {
    if (!parent.contains(key)) {
        add_type(check, path, "required field is missing");
        return;
    }
    const Json& v = parent.at(key);
    if (!v.is_string()) {
        add_type(check, path, "expected a string");
        return;
    }
    out = v.get<std::string>();
    const std::size_t len = trimmed_length(out);
    if (len == 0) {
        add_constraint(check, path, "must be non-empty");
    } else if (len < min_len) {
        add_constraint(check, path,
                       "must be at least " + std::to_string(min_len) +
                           " characters after trimming (got " + std::to_string(len) + ")");
    }
}

void parse_string_list(const Json& parent, const std::string& path, const char* key,
                       std::vector<std::string>& out, FieldCheck& check, bool key_required) {
    if (!parent.contains(key)) {
        if (key_required) add_type(check, path, "required field is missing");
        return;
    }
    const Json& v = parent.at(key);
    if (!v.is_array()) {
        add_type(check, path, "expected an array of strings");
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) {
            add_type(check, path + "[" + std::to_string(i) + "]", "expected a string");
            continue;
        }
        out.push_back(v[i].get<std::string>());
    }
}

void parse_named_parts(const Json& parent, const std::string& path, const char* key,
                       std::vector<NamedPart>& out, FieldCheck& check) {
    if (!parent.contains(key)) return;  // lists may be absent (treated as empty)
    const Json& v = parent.at(key);
    if (!v.is_array()) {
        add_type(check, path, "expected an array of {name, purpose} objects");
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string entry_path = path + "[" + std::to_string(i) + "]";
        const Json& item = v[i];
        if (!item.is_object()) {
            add_type(check, entry_path, "expected an object with name and purpose");
            continue;
        }
        NamedPart part;
        if (!item.contains("name") || !item.at("name").is_string()) {
            add_type(check, entry_path + ".name", "expected a string");
            continue;
        }
        part.name = item.at("name").get<std::string>();
        if (trimmed_length(part.name) == 0) {
            add_constraint(check, entry_path + ".name", "must be non-empty");
        }
        if (item.contains("purpose")) {
            if (!item.at("purpose").is_string()) {
                add_type(check, entry_path + ".purpose", "expected a string");
            } else {
                part.purpose = item.at("purpose").get<std::string>();
            }
        }
        out.push_back(std::move(part));
    }
}

void parse_game_type(const Json& doc, GameDesign& out, FieldCheck& check) {
    if (!doc.contains("game_type")) {
        add_type(check, "game_type", "required field is missing");
        return;
    }
    const Json& v = doc.at("game_type");
    if (!v.is_string()) {
        add_type(check, "game_type", "expected a string");
        return;
    }
    const auto parsed = game_type_from_string(v.get<std::string>());
    if (!parsed) {
        add_type(check, "game_type",
                 "unrecognized game type '" + v.get<std::string>() +
                     "'; allowed: cooperative, competitive, semi-cooperative");
        return;
    }
    out.game_type = *parsed;
}

void parse_mechanisms(const Json& doc, GameDesign& out, FieldCheck& check) {
    if (!doc.contains("primary_mechanisms")) {
        add_type(check, "primary_mechanisms", "required field is missing");
        return;
    }
    const Json& v = doc.at("primary_mechanisms");
    if (!v.is_array()) {
        add_type(check, "primary_mechanisms", "expected an array of mechanism tokens");
        return;
    }
    bool token_error = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "primary_mechanisms[" + std::to_string(i) + "]";
        if (!v[i].is_string()) {
            add_type(check, path, "expected a string");
            token_error = true;
            continue;
        }
        const auto kind = mechanism_from_string(v[i].get<std::string>());
        if (!kind) {
            add_type(check, path,
                     "unrecognized mechanism '" + v[i].get<std::string>() +
                         "'; allowed: " + allowed_mechanism_list());
            token_error = true;
            continue;
        }
        if (std::find(out.primary_mechanisms.begin(), out.primary_mechanisms.end(), *kind) !=
            out.primary_mechanisms.end()) {
            add_constraint(check, path, "duplicate mechanism '" + to_string(*kind) + "'");
            continue;
        }
        out.primary_mechanisms.push_back(*kind);
    }
    const std::size_t n = v.size();
    if (!token_error && (n < kMechanismMin || n > kMechanismMax)) {
        add_constraint(check, "primary_mechanisms",
                       "must list between " + std::to_string(kMechanismMin) + " and " +
                           std::to_string(kMechanismMax) + " mechanisms (got " +
                           std::to_string(n) + ")");
    }
}

void parse_components(const Json& doc, GameDesign& out, FieldCheck& check) {
    if (!doc.contains("components")) {
        add_type(check, "components", "required field is missing");
        return;
    }
    const Json& v = doc.at("components");
    if (!v.is_object()) {
        add_type(check, "components", "expected an object");
        return;
    }
    if (v.contains("board_description") && !v.at("board_description").is_null()) {
        if (!v.at("board_description").is_string()) {
            add_type(check, "components.board_description", "expected a string or null");
        } else {
            out.components.board_description = v.at("board_description").get<std::string>();
        }
    }
    parse_named_parts(v, "components.card_types", "card_types", out.components.card_types, check);
    parse_named_parts(v, "components.tokens", "tokens", out.components.tokens, check);
    parse_string_list(v, "components.other_components", "other_components",
                      out.components.other_components, check, /*key_required=*/false);
}

void parse_players(const Json& doc, GameDesign& out, FieldCheck& check) {
    if (!doc.contains("players")) {
        add_type(check, "players", "required field is missing");
        return;
    }
    const Json& v = doc.at("players");
    if (!v.is_object()) {
        add_type(check, "players", "expected an object");
        return;
    }
    bool counts_ok = true;
    auto parse_count = [&](const char* key, int& slot) {
        const std::string path = std::string("players.") + key;
        if (!v.contains(key)) {
            add_type(check, path, "required field is missing");
            counts_ok = false;
            return;
        }
        if (!v.at(key).is_number_integer()) {
            add_type(check, path, "expected an integer");
            counts_ok = false;
            return;
        }
        slot = v.at(key).get<int>();
        if (slot < 1) {
            add_constraint(check, path, "must be at least 1");
            counts_ok = false;
        }
    };
    parse_count("min_players", out.players.min_players);
    parse_count("max_players", out.players.max_players);
    if (counts_ok && out.players.max_players < out.players.min_players) {
        add_constraint(check, "players.max_players", "must be >= min_players");
    }
    parse_string_list(v, "players.roles", "roles", out.players.roles, check,
                      /*key_required=*/false);
    parse_text(v, "players.interaction_style", "interaction_style", 1,
               out.players.interaction_style, check);
}

void apply_top_field(const Json& doc, const std::string& name, GameDesign& out,
                     FieldCheck& check) {
    if (name == "title") {
        parse_text(doc, "title", "title", 1, out.title, check);
    } else if (name == "theme") {
        parse_text(doc, "theme", "theme", 1, out.theme, check);
    } else if (name == "game_type") {
        parse_game_type(doc, out, check);
    } else if (name == "goal") {
        parse_text(doc, "goal", "goal", kGoalMinLength, out.goal, check);
    } else if (name == "end_condition") {
        parse_text(doc, "end_condition", "end_condition", kEndConditionMinLength,
                   out.end_condition, check);
    } else if (name == "primary_mechanisms") {
        parse_mechanisms(doc, out, check);
    } else if (name == "turn_structure") {
        parse_text(doc, "turn_structure", "turn_structure", 1, out.turn_structure, check);
    } else if (name == "uncertainty_source") {
        parse_text(doc, "uncertainty_source", "uncertainty_source", 1, out.uncertainty_source,
                   check);
    } else if (name == "components") {
        parse_components(doc, out, check);
    } else if (name == "players") {
        parse_players(doc, out, check);
    } else if (name == "setup") {
        parse_text(doc, "setup", "setup", 1, out.setup, check);
    } else if (name == "core_loop") {
        parse_text(doc, "core_loop", "core_loop", 1, out.core_loop, check);
    } else if (name == "strategic_depth") {
        parse_text(doc, "strategic_depth", "strategic_depth", 1, out.strategic_depth, check);
    }
}

ParseFailure failure_from_check(const FieldCheck& check) {
    ParseFailure failure;
    failure.kind = check.type_errors.empty() ? ParseFailure::Kind::constraint
                                             : ParseFailure::Kind::type;
    failure.errors = check.type_errors;
    failure.errors.insert(failure.errors.end(), check.constraint_errors.begin(),
                          check.constraint_errors.end());
    return failure;
}

}  // namespace

FieldCheck check_document_fields(const Json& document,
                                 const std::vector<std::string>& top_level_names) {
    FieldCheck check;
    if (!document.is_object()) {
        add_type(check, "", "document must be a JSON object");
        return check;
    }
    GameDesign scratch;
    for (const auto& name : top_level_names) {
        apply_top_field(document, name, scratch, check);
    }
    return check;
}

DesignParseResult parse_design_json(const Json& document) {
    DesignParseResult result;
    if (!document.is_object()) {
        result.failure.kind = ParseFailure::Kind::type;
        result.failure.errors.push_back({"", "document must be a JSON object"});
        return result;
    }
    GameDesign design;
    FieldCheck check;
    for (const auto& name : required_document_fields()) {
        apply_top_field(document, name, design, check);
    }
    if (!check.ok()) {
        result.failure = failure_from_check(check);
        return result;
    }
    result.design = std::move(design);
    return result;
}

DesignParseResult parse_design(const std::string& document) {
    Json parsed = Json::parse(document, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
        DesignParseResult result;
        result.failure.kind = ParseFailure::Kind::syntax;
        result.failure.errors.push_back({"", "document is not valid JSON"});
        return result;
    }
    return parse_design_json(parsed);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

Json design_to_json(const GameDesign& design) {
    Json doc = Json::object();
    doc["title"] = design.title;
    doc["theme"] = design.theme;
    doc["game_type"] = to_string(design.game_type);
    doc["goal"] = design.goal;
    doc["end_condition"] = design.end_condition;
    Json mechanisms = Json::array();
    for (auto m : design.primary_mechanisms) mechanisms.push_back(to_string(m));
    doc["primary_mechanisms"] = std::move(mechanisms);
    doc["turn_structure"] = design.turn_structure;
    doc["uncertainty_source"] = design.uncertainty_source;

    Json components = Json::object();
    if (design.components.board_description) {
        components["board_description"] = *design.components.board_description;
    }
    auto parts_to_json = [](const std::vector<NamedPart>& parts) {
        Json arr = Json::array();
        for (const auto& p : parts) {
            arr.push_back(Json{{"name", p.name}, {"purpose", p.purpose}});
        }
        return arr;
    };
    components["card_types"] = parts_to_json(design.components.card_types);
    components["tokens"] = parts_to_json(design.components.tokens);
    components["other_components"] = design.components.other_components;
    doc["components"] = std::move(components);

    Json players = Json::object();
    players["min_players"] = design.players.min_players;
    players["max_players"] = design.players.max_players;
    players["roles"] = design.players.roles;
    players["interaction_style"] = design.players.interaction_style;
    doc["players"] = std::move(players);

    doc["setup"] = design.setup;
    doc["core_loop"] = design.core_loop;
    doc["strategic_depth"] = design.strategic_depth;
    return doc;
}

std::string serialize_design(const GameDesign& design) {
    return design_to_json(design).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Field catalog
// ---------------------------------------------------------------------------

const std::vector<std::string>& required_document_fields() {
    static const std::vector<std::string> kRequired = {
        "title",          "theme",    "game_type",          "goal",
        "end_condition",  "primary_mechanisms", "turn_structure", "uncertainty_source",
        "components",     "players",  "setup",              "core_loop",
        "strategic_depth",
    };
    return kRequired;
}

const FieldSpec* FieldCatalog::find(std::string_view path) const {
    for (const auto& f : fields) {
        if (f.field_path == path) return &f;
    }
    return nullptr;
}

FieldCatalog FieldCatalog::subset(const std::vector<std::string>& top_level_names) const {
    FieldCatalog out;
    for (const auto& f : fields) {
        for (const auto& name : top_level_names) {
            if (f.field_path == name ||
                (f.field_path.size() > name.size() && f.field_path.starts_with(name) &&
                 f.field_path[name.size()] == '.')) {
                out.fields.push_back(f);
                break;
            }
        }
    }
    return out;
}

const FieldCatalog& field_catalog() {
    static const FieldCatalog kCatalog = [] {
        FieldCatalog c;
        auto add = [&](std::string path, bool required, std::optional<int> min_len,
                       std::optional<int> max_len, std::string type_hint, std::string desc,
                       std::vector<std::string> allowed = {}) {
            c.fields.push_back({std::move(path), required, min_len, max_len, std::move(desc),
                                std::move(type_hint), std::move(allowed)});
        };
        std::vector<std::string> game_types(kGameTypeTokens.begin(), kGameTypeTokens.end());
        std::vector<std::string> mechanisms(kMechanismTokens.begin(), kMechanismTokens.end());

        add("title", true, std::nullopt, std::nullopt, "string", "Name of the game");
        add("theme", true, std::nullopt, std::nullopt, "string", "Setting and narrative");
        add("game_type", true, std::nullopt, std::nullopt, "string",
            "How players relate to each other", game_types);
        add("goal", true, kGoalMinLength, std::nullopt, "string", "Victory condition");
        add("end_condition", true, kEndConditionMinLength, std::nullopt, "string",
            "What triggers game end");
        add("primary_mechanisms", true, kMechanismMin, kMechanismMax,
            "array of mechanism tokens", "Core mechanisms drawn from the recognized taxonomy",
            mechanisms);
        add("turn_structure", true, std::nullopt, std::nullopt, "string",
            "What a player does on their turn, in order");
        add("uncertainty_source", true, std::nullopt, std::nullopt, "string",
            "Where unpredictability comes from (dice, hidden cards, events)");
        add("components.board_description", false, std::nullopt, std::nullopt,
            "string or null", "The board, if the game has one");
        add("components.card_types", false, std::nullopt, std::nullopt,
            "array of {name, purpose} objects", "Card types and the purpose each serves");
        add("components.tokens", false, std::nullopt, std::nullopt,
            "array of {name, purpose} objects", "Token types and the purpose each serves");
        add("components.other_components", false, std::nullopt, std::nullopt,
            "array of strings", "Components beyond board, cards, and tokens");
        add("players.min_players", true, std::nullopt, std::nullopt, "integer >= 1",
            "Smallest supported player count");
        add("players.max_players", true, std::nullopt, std::nullopt, "integer >= min_players",
            "Largest supported player count");
        add("players.roles", false, std::nullopt, std::nullopt, "array of strings",
            "Distinct player roles, if any");
        add("players.interaction_style", true, std::nullopt, std::nullopt, "string",
            "How players interact (negotiation, shared planning, rivalry)");
        add("setup", true, std::nullopt, std::nullopt, "string",
            "Initial game state and how to prepare it");
        add("core_loop", true, std::nullopt, std::nullopt, "string",
            "The repeating decision cycle that drives play");
        add("strategic_depth", true, std::nullopt, std::nullopt, "string",
            "What rewards skill and long-term planning");
        return c;
    }();
    return kCatalog;
}

}  // namespace gg

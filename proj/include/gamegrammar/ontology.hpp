#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gg {

// Insertion-ordered JSON so serialized designs keep a stable key order.
using Json = nlohmann::ordered_json;

/// Closed taxonomy of recognized game mechanisms. The string form is the
/// exact snake_case token; anything else fails to parse.
enum class MechanismKind {
    worker_placement,
    action_points,
    deck_building,
    resource_management,
    area_control,
    engine_building,
    set_collection,
    hidden_information,
};

inline constexpr int kMechanismCount = 8;

const std::vector<MechanismKind>& all_mechanisms();
std::string to_string(MechanismKind kind);
std::optional<MechanismKind> mechanism_from_string(std::string_view token);

enum class GameType {
    cooperative,
    competitive,
    semi_cooperative,  // serialized as "semi-cooperative"
};

std::string to_string(GameType type);
std::optional<GameType> game_type_from_string(std::string_view token);

/// A physical piece with a stated purpose (card type or token type).
struct NamedPart {
    std::string name;
    std::string purpose;

    bool operator==(const NamedPart&) const = default;
};

struct ComponentSet {
    std::optional<std::string> board_description;
    std::vector<NamedPart> card_types;
    std::vector<NamedPart> tokens;
    std::vector<std::string> other_components;

    bool operator==(const ComponentSet&) const = default;
};

struct PlayerDynamics {
    int min_players = 1;
    int max_players = 1;
    std::vector<std::string> roles;
    std::string interaction_style;

    bool operator==(const PlayerDynamics&) const = default;
};

/// A complete game design instance. Immutable by convention once parsed;
/// all invariants are enforced by parse_design, not by this struct.
struct GameDesign {
    std::string title;
    std::string theme;
    GameType game_type = GameType::competitive;
    std::string goal;            // >= 20 characters after trimming
    std::string end_condition;   // >= 10 characters after trimming
    std::vector<MechanismKind> primary_mechanisms;  // 2..4, no duplicates
    std::string turn_structure;
    std::string uncertainty_source;
    ComponentSet components;
    PlayerDynamics players;
    std::string setup;
    std::string core_loop;
    std::string strategic_depth;

    bool operator==(const GameDesign&) const = default;
};

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

struct FieldError {
    std::string field_path;
    std::string message;
};

struct ParseFailure {
    enum class Kind { syntax, type, constraint };

    Kind kind = Kind::syntax;
    std::vector<FieldError> errors;

    /// One human-readable line per violation, "path: message".
    std::vector<std::string> messages() const;
    std::string summary() const;
};

std::string to_string(ParseFailure::Kind kind);

struct DesignParseResult {
    std::optional<GameDesign> design;
    ParseFailure failure;  // meaningful only when !ok()

    bool ok() const { return design.has_value(); }
};

/// Parses and fully validates a design document. On failure every violated
/// constraint is listed with its field path; the messages double as retry
/// feedback for the generation loop.
DesignParseResult parse_design(const std::string& document);
DesignParseResult parse_design_json(const Json& document);

/// Canonical JSON: schema field order, 2-space indent, UTF-8.
/// parse_design(serialize_design(d)) reproduces d exactly.
std::string serialize_design(const GameDesign& design);
Json design_to_json(const GameDesign& design);

// ---------------------------------------------------------------------------
// Field catalog
// ---------------------------------------------------------------------------

/// Prompt- and validation-facing description of one leaf field.
struct FieldSpec {
    std::string field_path;
    bool required = true;
    std::optional<int> min_length;  // characters for text, entries for lists
    std::optional<int> max_length;
    std::string description;
    std::string type_hint;
    std::vector<std::string> allowed_values;  // non-empty for enum fields
};

struct FieldCatalog {
    std::vector<FieldSpec> fields;

    const FieldSpec* find(std::string_view path) const;
    /// Entries whose path equals one of the given top-level names or starts
    /// with "<name>.".
    FieldCatalog subset(const std::vector<std::string>& top_level_names) const;
};

/// The canonical GameDesign catalog: every leaf field exactly once, in
/// schema order, with the descriptions injected into prompts.
const FieldCatalog& field_catalog();

/// The 13 top-level document keys that completeness scoring counts.
const std::vector<std::string>& required_document_fields();

/// Validates the given top-level fields of a (possibly partial) document
/// with the same rules parse_design applies. Missing or mistyped fields
/// produce "type" errors, violated constraints "constraint" errors.
struct FieldCheck {
    std::vector<FieldError> type_errors;
    std::vector<FieldError> constraint_errors;

    bool ok() const { return type_errors.empty() && constraint_errors.empty(); }
    std::vector<std::string> messages() const;
};
FieldCheck check_document_fields(const Json& document,
                                 const std::vector<std::string>& top_level_names);

// ---------------------------------------------------------------------------
// Text helpers (shared by validation and prompt rendering)
// ---------------------------------------------------------------------------

/// Reads and parses a JSON file. Returns a discarded value with *error set
/// when the file is unreadable or not valid JSON.
Json load_json_file(const std::string& path, std::string* error = nullptr);

std::string trim_copy(std::string_view text);
/// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view text);
/// utf8_length(trim_copy(text)) — the length all min-length checks use.
std::size_t trimmed_length(std::string_view text);

}  // namespace gg

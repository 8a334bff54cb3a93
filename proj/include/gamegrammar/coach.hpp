#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamegrammar/generation.hpp"
#include "gamegrammar/ontology.hpp"
#include "gamegrammar/stats.hpp"
#include "gamegrammar/validation.hpp"

namespace gg::coach {

// The seven creative dimensions in report order.
const std::vector<std::string>& creative_dimensions();

struct ScoreCard {
    int strategic_depth = 0;
    int tension_drama = 0;
    int player_agency = 0;
    int replayability = 0;
    int social_interaction = 0;
    int elegance = 0;
    int thematic_cohesion = 0;
    int fun_rating = 0;
    // Population stddev of the seven dimensions, always recomputed locally;
    // a model-reported value is discarded.
    double engagement_variance = 0.0;

    int dimension(std::size_t index) const;  // creative_dimensions() order
    // Any of the nine metric names (seven dimensions, fun_rating,
    // engagement_variance).
    double metric(const std::string& name) const;
};

double population_stddev(const std::vector<double>& values);

// One-sentence scoring rubric per dimension plus fun_rating, injected into
// the coach prompt. Editable via config so the prompt stays stable across
// reliability sessions.
struct CoachRubrics {
    std::vector<std::pair<std::string, std::string>> entries;

    static CoachRubrics defaults();
    static std::optional<CoachRubrics> from_json(const Json& doc, std::string* error = nullptr);
    static std::optional<CoachRubrics> load(const std::string& path,
                                            std::string* error = nullptr);
    Json to_json() const;
    const std::string* find(const std::string& dimension) const;
};

std::string coach_persona();
FieldCatalog coach_catalog(const CoachRubrics& rubrics);

// Failure messages driving the schema retry; out-of-range scores are
// rejected here, never clamped.
std::vector<std::string> check_scorecard_document(const Json& doc);
ScoreCard scorecard_from_json(const Json& doc);

struct EvaluationRecord {
    std::string design_id;
    std::string condition;
    int session = 1;
    ScoreCard scorecard;
    validation::ValidationReport structural;
    std::string evaluator_model;
    double evaluator_temperature = 0.0;
    int prompt_tokens = 0;
    int completion_tokens = 0;

    Json to_json() const;
    static std::optional<EvaluationRecord> from_json(const Json& doc,
                                                     std::string* error = nullptr);
};

struct EvaluationOutcome {
    std::optional<EvaluationRecord> record;
    // The deterministic structural half, present even when the creative
    // half exhausted its retries.
    validation::ValidationReport structural;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    bool tokens_estimated = false;
    std::string error;
    bool ok() const { return record.has_value(); }
};

// Structural lens via validate(design), creative lens via a schema-checked
// Design Coach generation, engagement variance recomputed locally.
EvaluationOutcome evaluate_design(const GameDesign& design, const std::string& design_id,
                                  const std::string& condition,
                                  const generation::ProviderConfig& cfg,
                                  generation::ChatTransport& transport,
                                  const CoachRubrics& rubrics,
                                  const validation::RuleRegistry& registry, int session = 1);

// Same creative lens over raw text (unconstrained baseline outputs), with
// the structural half scored by validate_raw.
EvaluationOutcome evaluate_document(const std::string& design_text, const std::string& design_id,
                                    const std::string& condition,
                                    const generation::ProviderConfig& cfg,
                                    generation::ChatTransport& transport,
                                    const CoachRubrics& rubrics,
                                    const validation::RuleRegistry& registry, int session = 1);

// Independent evaluations with session ids 1..sessions and no shared
// conversation state.
std::vector<EvaluationOutcome> evaluate_repeated(const GameDesign& design,
                                                 const std::string& design_id,
                                                 const std::string& condition,
                                                 const generation::ProviderConfig& cfg,
                                                 generation::ChatTransport& transport,
                                                 const CoachRubrics& rubrics,
                                                 const validation::RuleRegistry& registry,
                                                 int sessions);

// Flattens records into (condition, metric, value) observations covering
// the nine creative metrics plus completeness and consistency_errors.
std::vector<stats::Observation> to_observations(const std::vector<EvaluationRecord>& records);

// CSV with one row per record: design_id, condition, session, the nine
// creative metrics, completeness, consistency_errors.
std::string to_csv(const std::vector<EvaluationRecord>& records);
std::string csv_header();

}  // namespace gg::coach

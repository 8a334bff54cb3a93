#include "gamegrammar/coach.hpp"

#include <cmath>
#include <sstream>

namespace gg::coach {

const std::vector<std::string>& creative_dimensions() {
    static const std::vector<std::string> kDimensions = {
        "strategic_depth", "tension_drama",      "player_agency", "replayability",
        "social_interaction", "elegance", "thematic_cohesion",
    };
    return kDimensions;
}

int ScoreCard::dimension(std::size_t index) const {
    switch (index) {
        case 0: return strategic_depth;
        case 1: return tension_drama;
        case 2: return player_agency;
        case 3: return replayability;
        case 4: return social_interaction;
        case 5: return elegance;
        case 6: return thematic_cohesion;
        default: return 0;
    }
}

double ScoreCard::metric(const std::string& name) const {
    const auto& dims = creative_dimensions();
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] == name) return static_cast<double>(dimension(i));
    }
    if (name == "fun_rating") return static_cast<double>(fun_rating);
    if (name == "engagement_variance") return engagement_variance;
    return 0.0;
}

double population_stddev(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

// ---------------------------------------------------------------------------
// Rubrics and coach schema
// ---------------------------------------------------------------------------

CoachRubrics CoachRubrics::defaults() {
    CoachRubrics rubrics;
    rubrics.entries = {
        {"strategic_depth",
         "How many meaningfully different routes to victory the rules support."},
        {"tension_drama", "How often play produces close calls and dramatic reversals."},
        {"player_agency", "How much outcomes turn on player decisions rather than luck."},
        {"replayability", "How different consecutive plays of the same game feel."},
        {"social_interaction", "How much the game makes players engage with each other."},
        {"elegance", "How much play the design gets out of how few rules."},
        {"thematic_cohesion", "How naturally the mechanisms express the theme."},
        {"fun_rating", "Overall: how much you would enjoy actually playing this."},
    };
    return rubrics;
}

std::optional<CoachRubrics> CoachRubrics::from_json(const Json& doc, std::string* error) {
    if (!doc.is_object()) {
        if (error) *error = "rubrics must be a JSON object of dimension: sentence";
        return std::nullopt;
    }
    CoachRubrics rubrics;
    for (const auto& dimension : creative_dimensions()) {
        if (!doc.contains(dimension) || !doc[dimension].is_string()) {
            if (error) *error = "rubrics missing \"" + dimension + "\"";
            return std::nullopt;
        }
        rubrics.entries.push_back({dimension, doc[dimension].get<std::string>()});
    }
    if (!doc.contains("fun_rating") || !doc["fun_rating"].is_string()) {
        if (error) *error = "rubrics missing \"fun_rating\"";
        return std::nullopt;
    }
    rubrics.entries.push_back({"fun_rating", doc["fun_rating"].get<std::string>()});
    return rubrics;
}

std::optional<CoachRubrics> CoachRubrics::load(const std::string& path, std::string* error) {
    Json doc = load_json_file(path, error);
    if (doc.is_discarded()) return std::nullopt;
    return from_json(doc, error);
}

Json CoachRubrics::to_json() const {
    Json doc = Json::object();
    for (const auto& [dimension, rubric] : entries) doc[dimension] = rubric;
    return doc;
}

const std::string* CoachRubrics::find(const std::string& dimension) const {
    for (const auto& [name, rubric] : entries) {
        if (name == dimension) return &rubric;
    }
    return nullptr;
}

std::string coach_persona() {
    return "You are the Design Coach, an experienced tabletop game critic. Score "
           "the design honestly on each dimension, using the full 1 to 10 range; "
           "reserve 9 and 10 for work that would stand out among published games.";
}

FieldCatalog coach_catalog(const CoachRubrics& rubrics) {
    FieldCatalog catalog;
    for (const auto& dimension : creative_dimensions()) {
        const std::string* rubric = rubrics.find(dimension);
        catalog.fields.push_back(
            {dimension, true, std::nullopt, std::nullopt,
             rubric ? *rubric : "Score this dimension.", "integer 1-10", {}});
    }
    const std::string* fun = rubrics.find("fun_rating");
    catalog.fields.push_back({"fun_rating", true, std::nullopt, std::nullopt,
                              fun ? *fun : "Overall fun.", "integer 1-10", {}});
    return catalog;
}

std::vector<std::string> check_scorecard_document(const Json& doc) {
    std::vector<std::string> problems;
    if (!doc.is_object()) return {"scorecard must be a JSON object"};
    std::vector<std::string> names = creative_dimensions();
    names.push_back("fun_rating");
    for (const auto& name : names) {
        if (!doc.contains(name) || !doc[name].is_number_integer()) {
            problems.push_back("\"" + name + "\" must be an integer");
            continue;
        }
        const int score = doc[name].get<int>();
        if (score < 1 || score > 10) {
            problems.push_back("\"" + name + "\" must be between 1 and 10");
        }
    }
    return problems;
}

ScoreCard scorecard_from_json(const Json& doc) {
    ScoreCard card;
    card.strategic_depth = doc["strategic_depth"].get<int>();
    card.tension_drama = doc["tension_drama"].get<int>();
    card.player_agency = doc["player_agency"].get<int>();
    card.replayability = doc["replayability"].get<int>();
    card.social_interaction = doc["social_interaction"].get<int>();
    card.elegance = doc["elegance"].get<int>();
    card.thematic_cohesion = doc["thematic_cohesion"].get<int>();
    card.fun_rating = doc["fun_rating"].get<int>();
    std::vector<double> dims;
    for (std::size_t i = 0; i < creative_dimensions().size(); ++i) {
        dims.push_back(static_cast<double>(card.dimension(i)));
    }
    card.engagement_variance = population_stddev(dims);
    return card;
}

// ---------------------------------------------------------------------------
// Evaluation records
// ---------------------------------------------------------------------------

Json EvaluationRecord::to_json() const {
    Json doc;
    doc["design_id"] = design_id;
    doc["condition"] = condition;
    doc["session"] = session;
    Json scores = Json::object();
    const auto& dims = creative_dimensions();
    for (std::size_t i = 0; i < dims.size(); ++i) scores[dims[i]] = scorecard.dimension(i);
    scores["fun_rating"] = scorecard.fun_rating;
    scores["engagement_variance"] = scorecard.engagement_variance;
    doc["scorecard"] = std::move(scores);
    doc["structural"] = structural.to_json();
    doc["evaluator_model"] = evaluator_model;
    doc["evaluator_temperature"] = evaluator_temperature;
    doc["prompt_tokens"] = prompt_tokens;
    doc["completion_tokens"] = completion_tokens;
    return doc;
}

std::optional<EvaluationRecord> EvaluationRecord::from_json(const Json& doc,
                                                            std::string* error) {
    auto fail = [&](const std::string& message) -> std::optional<EvaluationRecord> {
        if (error) *error = message;
        return std::nullopt;
    };
    if (!doc.is_object()) return fail("record must be a JSON object");
    for (const char* field : {"design_id", "condition"}) {
        if (!doc.contains(field) || !doc[field].is_string()) {
            return fail(std::string("record missing \"") + field + "\"");
        }
    }
    if (!doc.contains("scorecard") || !doc["scorecard"].is_object()) {
        return fail("record missing \"scorecard\"");
    }
    const auto scorecard_problems = check_scorecard_document(doc["scorecard"]);
    if (!scorecard_problems.empty()) return fail(scorecard_problems.front());

    EvaluationRecord record;
    record.design_id = doc["design_id"].get<std::string>();
    record.condition = doc["condition"].get<std::string>();
    if (doc.contains("session") && doc["session"].is_number_integer()) {
        record.session = doc["session"].get<int>();
    }
    record.scorecard = scorecard_from_json(doc["scorecard"]);
    if (doc.contains("structural") && doc["structural"].is_object()) {
        record.structural = validation::ValidationReport::from_json(doc["structural"]);
    }
    if (doc.contains("evaluator_model") && doc["evaluator_model"].is_string()) {
        record.evaluator_model = doc["evaluator_model"].get<std::string>();
    }
    if (doc.contains("evaluator_temperature") && doc["evaluator_temperature"].is_number()) {
        record.evaluator_temperature = doc["evaluator_temperature"].get<double>();
    }
    if (doc.contains("prompt_tokens") && doc["prompt_tokens"].is_number_integer()) {
        record.prompt_tokens = doc["prompt_tokens"].get<int>();
    }
    if (doc.contains("completion_tokens") && doc["completion_tokens"].is_number_integer()) {
        record.completion_tokens = doc["completion_tokens"].get<int>();
    }
    return record;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

EvaluationOutcome evaluate_text(const std::string& design_text,
                                validation::ValidationReport structural,
                                const std::string& design_id, const std::string& condition,
                                const generation::ProviderConfig& cfg,
                                generation::ChatTransport& transport,
                                const CoachRubrics& rubrics, int session) {
    EvaluationOutcome outcome;
    outcome.structural = std::move(structural);

    generation::Signature sig;
    sig.persona = coach_persona();
    sig.inputs = {{"design", "The game design under evaluation", design_text}};
    sig.output_catalog = coach_catalog(rubrics);

    generation::DocumentOutcome doc =
        generation::generate_document(sig, cfg, transport, check_scorecard_document);
    outcome.prompt_tokens = doc.prompt_tokens;
    outcome.completion_tokens = doc.completion_tokens;
    outcome.tokens_estimated = doc.tokens_estimated;
    if (!doc.ok()) {
        outcome.error = doc.error;
        return outcome;
    }

    EvaluationRecord record;
    record.design_id = design_id;
    record.condition = condition;
    record.session = session;
    record.scorecard = scorecard_from_json(*doc.document);
    record.structural = outcome.structural;
    record.evaluator_model = cfg.model_id;
    record.evaluator_temperature = cfg.temperature;
    record.prompt_tokens = doc.prompt_tokens;
    record.completion_tokens = doc.completion_tokens;
    outcome.record = std::move(record);
    return outcome;
}

}  // namespace

EvaluationOutcome evaluate_design(const GameDesign& design, const std::string& design_id,
                                  const std::string& condition,
                                  const generation::ProviderConfig& cfg,
                                  generation::ChatTransport& transport,
                                  const CoachRubrics& rubrics,
                                  const validation::RuleRegistry& registry, int session) {
    return evaluate_text(serialize_design(design), validation::validate(design, registry),
                         design_id, condition, cfg, transport, rubrics, session);
}

EvaluationOutcome evaluate_document(const std::string& design_text, const std::string& design_id,
                                    const std::string& condition,
                                    const generation::ProviderConfig& cfg,
                                    generation::ChatTransport& transport,
                                    const CoachRubrics& rubrics,
                                    const validation::RuleRegistry& registry, int session) {
    return evaluate_text(design_text, validation::validate_raw(design_text, registry), design_id,
                         condition, cfg, transport, rubrics, session);
}

std::vector<EvaluationOutcome> evaluate_repeated(const GameDesign& design,
                                                 const std::string& design_id,
                                                 const std::string& condition,
                                                 const generation::ProviderConfig& cfg,
                                                 generation::ChatTransport& transport,
                                                 const CoachRubrics& rubrics,
                                                 const validation::RuleRegistry& registry,
                                                 int sessions) {
    std::vector<EvaluationOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(sessions));
    for (int session = 1; session <= sessions; ++session) {
        outcomes.push_back(evaluate_design(design, design_id, condition, cfg, transport, rubrics,
                                           registry, session));
    }
    return outcomes;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

std::vector<stats::Observation> to_observations(const std::vector<EvaluationRecord>& records) {
    std::vector<stats::Observation> observations;
    std::vector<std::string> metrics = creative_dimensions();
    metrics.push_back("fun_rating");
    metrics.push_back("engagement_variance");
    for (const auto& record : records) {
        for (const auto& metric : metrics) {
            observations.push_back({record.condition, metric, record.scorecard.metric(metric)});
        }
        observations.push_back({record.condition, "completeness", record.structural.completeness});
        observations.push_back({record.condition, "consistency_errors",
                                static_cast<double>(record.structural.consistency_errors)});
    }
    return observations;
}

std::string csv_header() {
    std::string header = "design_id,condition,session";
    for (const auto& dimension : creative_dimensions()) header += "," + dimension;
    header += ",fun_rating,engagement_variance,completeness,consistency_errors";
    return header;
}

std::string to_csv(const std::vector<EvaluationRecord>& records) {
    std::ostringstream out;
    out << csv_header() << "\n";
    for (const auto& record : records) {
        out << record.design_id << "," << record.condition << "," << record.session;
        for (std::size_t i = 0; i < creative_dimensions().size(); ++i) {
            out << "," << record.scorecard.dimension(i);
        }
        out << "," << record.scorecard.fun_rating;
        out << "," << record.scorecard.engagement_variance;
        out << "," << record.structural.completeness;
        out << "," << record.structural.consistency_errors;
        out << "\n";
    }
    return out.str();
}

}  // namespace gg::coach

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamegrammar/agents.hpp"
#include "gamegrammar/coach.hpp"
#include "gamegrammar/generation.hpp"
#include "gamegrammar/ontology.hpp"
#include "gamegrammar/retrieval.hpp"
#include "gamegrammar/stats.hpp"
#include "gamegrammar/validation.hpp"

namespace gg::study {

struct ThemePrompt {
    int id = 0;
    std::string theme;
    std::string constraints;  // player count, type, complexity, time
};

// The ten standardized ablation prompts.
const std::vector<ThemePrompt>& default_theme_prompts();

enum class StudyKind { ablation, benchmark, reliability };

std::string to_string(StudyKind kind);
std::optional<StudyKind> study_kind_from_string(const std::string& token);

struct StudyPlan {
    StudyKind study = StudyKind::ablation;
    std::vector<agents::Condition> conditions;  // ablation
    std::vector<ThemePrompt> prompts;           // ablation; defaults to the ten
    int replications = 1;                       // ablation
    int sessions = 1;                           // reliability
    long seed = 0;
    std::string reference_dir;  // benchmark: hand-encoded reference designs
    std::string generated_dir;  // benchmark: generated designs to compare
    std::string designs_dir;    // reliability: designs to re-evaluate

    static std::optional<StudyPlan> from_json(const Json& doc, std::string* error = nullptr);
    static std::optional<StudyPlan> load(const std::string& path, std::string* error = nullptr);
    Json to_json() const;

    int planned_runs() const;  // generation/evaluation count implied by shape
};

// Everything a study needs beyond the plan. The transport is required;
// transcripts make the whole run offline.
struct StudyDeps {
    generation::ProviderConfig provider;
    generation::ProviderConfig evaluator;
    generation::ChatTransport* transport = nullptr;
    agents::AgentRoster roster = agents::AgentRoster::defaults();
    validation::RuleRegistry registry = validation::RuleRegistry::extended();
    coach::CoachRubrics rubrics = coach::CoachRubrics::defaults();
    const retrieval::CorpusIndex* corpus = nullptr;   // C4 precedent source
    const retrieval::Embedder* embedder = nullptr;    // required with corpus
    std::string run_dir;                              // artifact directory
    bool no_rag = false;
};

struct CostRow {
    std::string condition;
    int runs = 0;
    double mean_generation_tokens = 0.0;
    double mean_fun = 0.0;
    // Absent when mean fun is zero; reported as undefined.
    std::optional<double> tokens_per_fun_point;
};

struct IccRow {
    std::string metric;
    std::optional<stats::IccReport> report;  // absent when variance was zero
    std::string note;
};

struct StudyReport {
    StudyKind study = StudyKind::ablation;
    int planned_runs = 0;
    int completed_runs = 0;
    int skipped_existing = 0;  // resumed from persisted records
    int exclusions = 0;
    std::vector<std::string> exclusion_notes;
    std::vector<coach::EvaluationRecord> records;  // all persisted records
    std::vector<stats::SummaryRow> structural_rows;
    std::vector<stats::SummaryRow> creative_rows;
    std::vector<stats::EffectReport> effects;
    std::vector<CostRow> cost;
    std::vector<IccRow> icc_rows;  // reliability only, ICC descending
    std::string report_markdown;
    std::string report_csv;
    std::string run_dir;
    bool ok() const { return exclusions == 0; }
};

// Runs condition x prompt x replication, generating with the condition's
// machinery and evaluating through the Design Coach. Persists every design,
// per-run token record, and evaluation; reruns with the same run_dir skip
// already-persisted (condition, prompt, replication, session) keys. Emits
// per-condition structural and creative summaries, pairwise effects between
// adjacent plan conditions, and the cost table.
StudyReport run_ablation(const StudyPlan& plan, const StudyDeps& deps);

// Evaluates hand-encoded reference designs and generated designs through
// the identical coach, then reports real-vs-generated effects per creative
// metric plus mechanism-count and component-count comparisons.
StudyReport run_benchmark(const StudyPlan& plan, const StudyDeps& deps);

// Evaluates each design `sessions` times, builds one targets x sessions
// matrix per metric, and reports ICC(2,1) rows sorted descending.
StudyReport run_reliability(const StudyPlan& plan, const StudyDeps& deps);
StudyReport run_reliability(const std::vector<std::pair<std::string, GameDesign>>& designs,
                            const StudyPlan& plan, const StudyDeps& deps);

// Component-count rule used by the benchmark comparison:
// |card_types| + |tokens| + (1 if board) + |other_components|.
int component_count(const GameDesign& design);

}  // namespace gg::study

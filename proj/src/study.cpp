#include "gamegrammar/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace gg::study {

// ---------------------------------------------------------------------------
// Prompts and plans
// ---------------------------------------------------------------------------

const std::vector<ThemePrompt>& default_theme_prompts() {
    static const std::vector<ThemePrompt> kPrompts = {
        {1, "Bioluminescent fungi competing in a cave ecosystem",
         "2-4 players, competitive, medium complexity, 45-60 minutes"},
        {2, "Victorian-era detective solving mysteries through deduction",
         "2-4 players, competitive, medium-heavy complexity, 60-90 minutes"},
        {3, "Space traders negotiating routes between planets",
         "3-5 players, competitive, medium-heavy complexity, 60-90 minutes"},
        {4, "Medieval knights jousting in a tournament",
         "2-4 players, competitive, light complexity, 30-45 minutes"},
        {5, "Deep sea divers recovering treasure from a sunken ship",
         "2-4 players, cooperative, medium complexity, 45-60 minutes"},
        {6, "Rival chefs competing in a cooking competition",
         "2-4 players, competitive, medium complexity, 45-60 minutes"},
        {7, "Ancient civilizations building wonders of the world",
         "2-5 players, competitive, medium-heavy complexity, 90-120 minutes"},
        {8, "Escape room where the walls are closing in",
         "2-4 players, cooperative, medium complexity, 30-45 minutes"},
        {9, "Fairy tale creatures vying for control of an enchanted forest",
         "2-4 players, competitive, medium complexity, 45-60 minutes"},
        {10, "Time travelers preventing paradoxes across historical eras",
         "2-4 players, cooperative, heavy complexity, 90-120 minutes"},
    };
    return kPrompts;
}

std::string to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::ablation: return "ablation";
        case StudyKind::benchmark: return "benchmark";
        case StudyKind::reliability: return "reliability";
    }
    return "ablation";
}

std::optional<StudyKind> study_kind_from_string(const std::string& token) {
    if (token == "ablation") return StudyKind::ablation;
    if (token == "benchmark") return StudyKind::benchmark;
    if (token == "reliability") return StudyKind::reliability;
    return std::nullopt;
}

std::optional<StudyPlan> StudyPlan::from_json(const Json& doc, std::string* error) {
    auto fail = [&](const std::string& message) -> std::optional<StudyPlan> {
        if (error) *error = message;
        return std::nullopt;
    };
    if (!doc.is_object()) return fail("plan must be a JSON object");
    if (!doc.contains("study") || !doc["study"].is_string()) {
        return fail("plan missing \"study\"");
    }
    const auto kind = study_kind_from_string(doc["study"].get<std::string>());
    if (!kind) return fail("unknown study \"" + doc["study"].get<std::string>() + "\"");

    StudyPlan plan;
    plan.study = *kind;
    if (doc.contains("seed") && doc["seed"].is_number_integer()) {
        plan.seed = doc["seed"].get<long>();
    }

    if (plan.study == StudyKind::ablation) {
        if (!doc.contains("conditions") || !doc["conditions"].is_array() ||
            doc["conditions"].empty()) {
            return fail("ablation plan needs a non-empty \"conditions\" array");
        }
        for (const auto& token : doc["conditions"]) {
            if (!token.is_string()) return fail("conditions must be strings");
            const auto condition = agents::condition_from_string(token.get<std::string>());
            if (!condition) {
                return fail("unknown condition \"" + token.get<std::string>() + "\"");
            }
            plan.conditions.push_back(*condition);
        }
        if (doc.contains("prompts") && doc["prompts"].is_array()) {
            for (const auto& entry : doc["prompts"]) {
                if (!entry.is_object() || !entry.contains("id") ||
                    !entry["id"].is_number_integer() || !entry.contains("theme") ||
                    !entry["theme"].is_string() || !entry.contains("constraints") ||
                    !entry["constraints"].is_string()) {
                    return fail("each prompt needs integer \"id\", \"theme\", \"constraints\"");
                }
                plan.prompts.push_back({entry["id"].get<int>(),
                                        entry["theme"].get<std::string>(),
                                        entry["constraints"].get<std::string>()});
            }
        } else {
            plan.prompts = default_theme_prompts();
        }
        std::set<int> ids;
        for (const auto& prompt : plan.prompts) {
            if (!ids.insert(prompt.id).second) return fail("duplicate prompt id");
        }
        if (!doc.contains("replications") || !doc["replications"].is_number_integer() ||
            doc["replications"].get<int>() < 1) {
            return fail("ablation plan needs \"replications\" >= 1");
        }
        plan.replications = doc["replications"].get<int>();
        return plan;
    }

    if (plan.study == StudyKind::benchmark) {
        for (const char* field : {"reference_dir", "generated_dir"}) {
            if (!doc.contains(field) || !doc[field].is_string() ||
                doc[field].get<std::string>().empty()) {
                return fail(std::string("benchmark plan needs \"") + field + "\"");
            }
        }
        plan.reference_dir = doc["reference_dir"].get<std::string>();
        plan.generated_dir = doc["generated_dir"].get<std::string>();
        return plan;
    }

    // reliability
    if (!doc.contains("designs_dir") || !doc["designs_dir"].is_string() ||
        doc["designs_dir"].get<std::string>().empty()) {
        return fail("reliability plan needs \"designs_dir\"");
    }
    plan.designs_dir = doc["designs_dir"].get<std::string>();
    if (!doc.contains("sessions") || !doc["sessions"].is_number_integer() ||
        doc["sessions"].get<int>() < 2) {
        return fail("reliability plan needs \"sessions\" >= 2");
    }
    plan.sessions = doc["sessions"].get<int>();
    return plan;
}

std::optional<StudyPlan> StudyPlan::load(const std::string& path, std::string* error) {
    Json doc = load_json_file(path, error);
    if (doc.is_discarded()) return std::nullopt;
    return from_json(doc, error);
}

Json StudyPlan::to_json() const {
    Json doc;
    doc["study"] = to_string(study);
    if (study == StudyKind::ablation) {
        doc["conditions"] = Json::array();
        for (const auto condition : conditions) {
            doc["conditions"].push_back(agents::to_string(condition));
        }
        doc["prompts"] = Json::array();
        for (const auto& prompt : prompts) {
            doc["prompts"].push_back({{"id", prompt.id},
                                      {"theme", prompt.theme},
                                      {"constraints", prompt.constraints}});
        }
        doc["replications"] = replications;
    } else if (study == StudyKind::benchmark) {
        doc["reference_dir"] = reference_dir;
        doc["generated_dir"] = generated_dir;
    } else {
        doc["designs_dir"] = designs_dir;
        doc["sessions"] = sessions;
    }
    doc["seed"] = seed;
    return doc;
}

int StudyPlan::planned_runs() const {
    switch (study) {
        case StudyKind::ablation:
            return static_cast<int>(conditions.size() * prompts.size()) * replications;
        case StudyKind::reliability:
            return sessions;  // per design; total known once designs are loaded
        case StudyKind::benchmark:
            return 0;  // known once both directories are listed
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

int component_count(const GameDesign& design) {
    const auto& c = design.components;
    return static_cast<int>(c.card_types.size() + c.tokens.size() + c.other_components.size()) +
           (c.board_description ? 1 : 0);
}

namespace {

std::string fmt(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void append_line(const fs::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + path.string());
    out << line << "\n";
}

// Persisted evaluations keyed by (design_id, session).
std::map<std::pair<std::string, int>, coach::EvaluationRecord> load_existing_records(
    const fs::path& path) {
    std::map<std::pair<std::string, int>, coach::EvaluationRecord> records;
    std::ifstream in(path, std::ios::binary);
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        Json doc = Json::parse(line, nullptr, false);
        if (doc.is_discarded()) continue;
        auto record = coach::EvaluationRecord::from_json(doc);
        if (!record) continue;
        records[{record->design_id, record->session}] = std::move(*record);
    }
    return records;
}

std::vector<fs::path> sorted_json_files(const fs::path& dir) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) return files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

void sort_records(std::vector<coach::EvaluationRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const coach::EvaluationRecord& a, const coach::EvaluationRecord& b) {
                  if (a.condition != b.condition) return a.condition < b.condition;
                  if (a.design_id != b.design_id) return a.design_id < b.design_id;
                  return a.session < b.session;
              });
}

std::vector<std::string> creative_metrics() {
    std::vector<std::string> metrics = coach::creative_dimensions();
    metrics.push_back("fun_rating");
    metrics.push_back("engagement_variance");
    return metrics;
}

std::vector<double> metric_values(const std::vector<coach::EvaluationRecord>& records,
                                  const std::string& condition, const std::string& metric) {
    std::vector<double> values;
    for (const auto& record : records) {
        if (record.condition == condition) values.push_back(record.scorecard.metric(metric));
    }
    return values;
}

void split_summary_rows(const std::vector<coach::EvaluationRecord>& records,
                        StudyReport& report) {
    const auto rows = stats::aggregate_by_condition(coach::to_observations(records));
    for (const auto& row : rows) {
        if (row.metric == "completeness" || row.metric == "consistency_errors") {
            report.structural_rows.push_back(row);
        } else {
            report.creative_rows.push_back(row);
        }
    }
}

std::string markdown_summary_table(const std::vector<stats::SummaryRow>& rows,
                                   const std::vector<std::string>& metrics,
                                   const std::vector<std::string>& conditions) {
    std::ostringstream out;
    out << "| Condition |";
    for (const auto& metric : metrics) out << " " << metric << " |";
    out << " n |\n|---|";
    for (std::size_t i = 0; i < metrics.size(); ++i) out << "---|";
    out << "---|\n";
    for (const auto& condition : conditions) {
        int n = 0;
        out << "| " << condition << " |";
        for (const auto& metric : metrics) {
            const auto row = std::find_if(rows.begin(), rows.end(), [&](const auto& r) {
                return r.condition == condition && r.metric == metric;
            });
            if (row == rows.end()) {
                out << " - |";
            } else {
                out << " " << fmt(row->mean, 2) << " (" << fmt(row->sd, 2) << ") |";
                n = row->n;
            }
        }
        out << " " << n << " |\n";
    }
    return out.str();
}

std::string markdown_effect_table(const std::vector<stats::EffectReport>& effects) {
    std::ostringstream out;
    out << "| Comparison | Mean A | Mean B | d | t | p | Sig |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& effect : effects) {
        out << "| " << effect.metric << " | " << fmt(effect.mean_a, 2) << " | "
            << fmt(effect.mean_b, 2) << " | " << fmt(effect.cohens_d, 2) << " | "
            << fmt(effect.t_statistic, 2) << " | " << fmt(effect.p_value, 4) << " | "
            << effect.significance << " |\n";
    }
    return out.str();
}

struct GenerationRunInfo {
    std::string design_id;
    std::string condition;
    int prompt_id = 0;
    int replication = 1;
    bool ok = false;
    int prompt_tokens = 0;
    int completion_tokens = 0;
    int attempts = 0;
    std::string error;

    Json to_json() const {
        Json doc;
        doc["design_id"] = design_id;
        doc["condition"] = condition;
        doc["prompt"] = prompt_id;
        doc["replication"] = replication;
        doc["ok"] = ok;
        doc["prompt_tokens"] = prompt_tokens;
        doc["completion_tokens"] = completion_tokens;
        doc["total_tokens"] = prompt_tokens + completion_tokens;
        doc["attempts"] = attempts;
        if (!error.empty()) doc["error"] = error;
        return doc;
    }
};

std::string ablation_design_id(agents::Condition condition, int prompt_id, int replication) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%s-p%02d-r%02d",
                  agents::to_string(condition).c_str(), prompt_id, replication);
    return buffer;
}

// Mean generation tokens per condition over runs that produced an
// evaluation record, read back from the persisted per-run files.
std::vector<CostRow> compute_cost(const fs::path& designs_dir,
                                  const std::vector<coach::EvaluationRecord>& records,
                                  const std::vector<std::string>& conditions) {
    std::set<std::string> evaluated;
    for (const auto& record : records) evaluated.insert(record.design_id);

    std::map<std::string, std::pair<long, int>> tokens_by_condition;  // sum, count
    for (const auto& path : sorted_json_files(designs_dir)) {
        if (path.filename().string().find(".run.json") == std::string::npos) continue;
        Json doc = load_json_file(path.string());
        if (doc.is_discarded() || !doc.is_object()) continue;
        if (!doc.contains("design_id") || !doc["design_id"].is_string()) continue;
        if (!evaluated.count(doc["design_id"].get<std::string>())) continue;
        const std::string condition = doc.value("condition", std::string{});
        auto& [sum, count] = tokens_by_condition[condition];
        sum += doc.value("total_tokens", 0);
        count += 1;
    }

    std::vector<CostRow> cost;
    for (const auto& condition : conditions) {
        CostRow row;
        row.condition = condition;
        const auto it = tokens_by_condition.find(condition);
        if (it != tokens_by_condition.end() && it->second.second > 0) {
            row.runs = it->second.second;
            row.mean_generation_tokens =
                static_cast<double>(it->second.first) / it->second.second;
        }
        const auto fun = metric_values(records, condition, "fun_rating");
        if (!fun.empty()) row.mean_fun = stats::mean(fun);
        if (row.mean_fun > 0.0) {
            row.tokens_per_fun_point = row.mean_generation_tokens / row.mean_fun;
        }
        cost.push_back(std::move(row));
    }
    return cost;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

void prepare_run_dir(const StudyPlan& plan, const StudyDeps& deps) {
    require(!deps.run_dir.empty(), "study needs a run directory");
    fs::create_directories(fs::path(deps.run_dir) / "designs");
    write_text_file(fs::path(deps.run_dir) / "plan.json", plan.to_json().dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// Ablation
// ---------------------------------------------------------------------------

StudyReport run_ablation(const StudyPlan& plan, const StudyDeps& deps) {
    require(plan.study == StudyKind::ablation, "plan is not an ablation study");
    require(deps.transport != nullptr, "study needs a transport");
    require(!plan.conditions.empty() && !plan.prompts.empty(), "empty ablation plan");
    prepare_run_dir(plan, deps);

    StudyReport report;
    report.study = StudyKind::ablation;
    report.planned_runs = plan.planned_runs();
    report.run_dir = deps.run_dir;

    const fs::path run_dir(deps.run_dir);
    const fs::path designs_dir = run_dir / "designs";
    const fs::path records_path = run_dir / "evaluations.jsonl";
    auto existing = load_existing_records(records_path);

    std::vector<coach::EvaluationRecord> records;
    for (const auto condition : plan.conditions) {
        for (const auto& prompt : plan.prompts) {
            // Precedents feed only the full pipeline (C4).
            std::string context;
            if (condition == agents::Condition::C4 && !deps.no_rag &&
                deps.corpus != nullptr && deps.embedder != nullptr) {
                retrieval::RetrievalQuery query;
                query.theme_text = prompt.theme;
                query.top_k = 3;
                context = retrieval::format_precedents(
                    deps.corpus->retrieve(query, *deps.embedder));
            }

            for (int replication = 1; replication <= plan.replications; ++replication) {
                const std::string id = ablation_design_id(condition, prompt.id, replication);
                if (auto it = existing.find({id, 1}); it != existing.end()) {
                    records.push_back(it->second);
                    ++report.skipped_existing;
                    continue;
                }

                GenerationRunInfo info;
                info.design_id = id;
                info.condition = agents::to_string(condition);
                info.prompt_id = prompt.id;
                info.replication = replication;

                std::optional<GameDesign> design;
                std::string raw_output;
                if (condition == agents::Condition::C4) {
                    agents::PipelineRun run = agents::run_pipeline(
                        prompt.theme, prompt.constraints, deps.provider, *deps.transport,
                        deps.roster, deps.registry, context);
                    info.ok = run.ok();
                    info.prompt_tokens = run.prompt_tokens;
                    info.completion_tokens = run.completion_tokens;
                    info.attempts = static_cast<int>(run.stage_outputs.size());
                    info.error = run.error;
                    if (run.ok()) {
                        design = run.final_design;
                        write_text_file(designs_dir / (id + ".json"),
                                        serialize_design(*design));
                        write_text_file(designs_dir / (id + ".pipeline.json"),
                                        run.to_json().dump(2) + "\n");
                    }
                } else {
                    generation::GenerationOutcome outcome = agents::single_agent_generate(
                        prompt.theme, prompt.constraints, deps.provider, *deps.transport,
                        condition, deps.registry);
                    info.prompt_tokens = outcome.prompt_tokens;
                    info.completion_tokens = outcome.completion_tokens;
                    info.attempts = static_cast<int>(outcome.attempts.size());
                    if (condition == agents::Condition::C1) {
                        info.ok = outcome.error.empty();
                        info.error = outcome.error;
                        if (info.ok) {
                            raw_output = outcome.attempts.back().raw_response;
                            write_text_file(designs_dir / (id + ".txt"), raw_output);
                        }
                    } else {
                        info.ok = outcome.ok();
                        info.error = outcome.error;
                        if (info.ok) {
                            design = outcome.design;
                            write_text_file(designs_dir / (id + ".json"),
                                            serialize_design(*design));
                        }
                    }
                }
                write_text_file(designs_dir / (id + ".run.json"),
                                info.to_json().dump(2) + "\n");
                if (!info.ok) {
                    ++report.exclusions;
                    report.exclusion_notes.push_back(id + ": " + info.error);
                    continue;
                }

                coach::EvaluationOutcome eval =
                    condition == agents::Condition::C1
                        ? coach::evaluate_document(raw_output, id, info.condition,
                                                   deps.evaluator, *deps.transport,
                                                   deps.rubrics, deps.registry, 1)
                        : coach::evaluate_design(*design, id, info.condition, deps.evaluator,
                                                 *deps.transport, deps.rubrics, deps.registry,
                                                 1);
                if (!eval.ok()) {
                    ++report.exclusions;
                    report.exclusion_notes.push_back(id + ": evaluation failed: " + eval.error);
                    continue;
                }
                append_line(records_path, eval.record->to_json().dump());
                records.push_back(*eval.record);
            }
        }
    }

    sort_records(records);
    report.records = records;
    report.completed_runs = static_cast<int>(records.size());
    split_summary_rows(records, report);

    // Effects between adjacent plan conditions, per creative metric. Pairs
    // with no variance on both sides are skipped.
    std::vector<std::string> condition_names;
    for (const auto condition : plan.conditions) {
        condition_names.push_back(agents::to_string(condition));
    }
    for (std::size_t i = 0; i + 1 < condition_names.size(); ++i) {
        for (const auto& metric : creative_metrics()) {
            const auto a = metric_values(records, condition_names[i], metric);
            const auto b = metric_values(records, condition_names[i + 1], metric);
            if (a.size() < 2 || b.size() < 2) continue;
            try {
                stats::EffectReport effect = stats::welch_test(a, b, metric);
                effect.metric =
                    condition_names[i] + " vs " + condition_names[i + 1] + ": " + metric;
                report.effects.push_back(std::move(effect));
            } catch (const std::domain_error&) {
                // zero variance in both groups, nothing to report
            }
        }
    }

    report.cost = compute_cost(designs_dir, records, condition_names);

    std::ostringstream md;
    md << "# Ablation study\n\n";
    md << "Plan: " << plan.conditions.size() << " conditions x " << plan.prompts.size()
       << " prompts x " << plan.replications << " replications = " << report.planned_runs
       << " runs\n\n";
    md << "Completed: " << report.completed_runs << ", resumed: " << report.skipped_existing
       << ", exclusions: " << report.exclusions << "\n\n";
    if (!report.exclusion_notes.empty()) {
        md << "## Exclusions\n\n";
        for (const auto& note : report.exclusion_notes) md << "- " << note << "\n";
        md << "\n";
    }
    md << "## Structural metrics by condition\n\n";
    md << markdown_summary_table(report.structural_rows,
                                 {"completeness", "consistency_errors"}, condition_names);
    md << "\n## Creative metrics by condition\n\n";
    md << markdown_summary_table(report.creative_rows, creative_metrics(), condition_names);
    md << "\n## Pairwise effects\n\n";
    md << markdown_effect_table(report.effects);
    md << "\n## Cost\n\n";
    md << "| Condition | Runs | Mean tokens | Mean fun | Tokens per fun point |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& row : report.cost) {
        md << "| " << row.condition << " | " << row.runs << " | "
           << fmt(row.mean_generation_tokens, 1) << " | " << fmt(row.mean_fun, 2) << " | "
           << (row.tokens_per_fun_point ? fmt(*row.tokens_per_fun_point, 1)
                                        : std::string("undefined"))
           << " |\n";
    }

    report.report_markdown = md.str();
    report.report_csv = coach::to_csv(records);
    write_text_file(run_dir / "report.md", report.report_markdown);
    write_text_file(run_dir / "report.csv", report.report_csv);
    return report;
}

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

StudyReport run_benchmark(const StudyPlan& plan, const StudyDeps& deps) {
    require(plan.study == StudyKind::benchmark, "plan is not a benchmark study");
    require(deps.transport != nullptr, "study needs a transport");
    prepare_run_dir(plan, deps);

    StudyReport report;
    report.study = StudyKind::benchmark;
    report.run_dir = deps.run_dir;

    const fs::path run_dir(deps.run_dir);
    const fs::path records_path = run_dir / "evaluations.jsonl";
    auto existing = load_existing_records(records_path);

    struct Entry {
        std::string id;
        std::string condition;
        GameDesign design;
    };
    std::vector<Entry> entries;
    const std::pair<std::string, std::string> sources[] = {
        {plan.reference_dir, "real"},
        {plan.generated_dir, "generated"},
    };
    for (const auto& [dir, condition] : sources) {
        for (const auto& path : sorted_json_files(dir)) {
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            DesignParseResult parsed = parse_design(buffer.str());
            if (!parsed.ok()) {
                ++report.exclusions;
                report.exclusion_notes.push_back(path.filename().string() + ": " +
                                                 parsed.failure.summary());
                continue;
            }
            const std::string prefix = condition == "real" ? "ref-" : "gen-";
            entries.push_back({prefix + path.stem().string(), condition, *parsed.design});
        }
    }
    report.planned_runs = static_cast<int>(entries.size());

    std::vector<coach::EvaluationRecord> records;
    for (const auto& entry : entries) {
        if (auto it = existing.find({entry.id, 1}); it != existing.end()) {
            records.push_back(it->second);
            ++report.skipped_existing;
            continue;
        }
        coach::EvaluationOutcome eval =
            coach::evaluate_design(entry.design, entry.id, entry.condition, deps.evaluator,
                                   *deps.transport, deps.rubrics, deps.registry, 1);
        if (!eval.ok()) {
            ++report.exclusions;
            report.exclusion_notes.push_back(entry.id + ": evaluation failed: " + eval.error);
            continue;
        }
        append_line(records_path, eval.record->to_json().dump());
        records.push_back(*eval.record);
    }

    sort_records(records);
    report.records = records;
    report.completed_runs = static_cast<int>(records.size());
    split_summary_rows(records, report);

    // Real-vs-generated effects per creative dimension plus fun.
    std::vector<std::string> metrics = coach::creative_dimensions();
    metrics.push_back("fun_rating");
    for (const auto& metric : metrics) {
        const auto real = metric_values(records, "real", metric);
        const auto generated = metric_values(records, "generated", metric);
        if (real.size() < 2 || generated.size() < 2) continue;
        try {
            report.effects.push_back(stats::welch_test(real, generated, metric));
        } catch (const std::domain_error&) {
        }
    }

    // Mechanism and component counts from the encoded designs themselves.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> counts;
    for (const auto& entry : entries) {
        counts[entry.condition].first.push_back(
            static_cast<double>(entry.design.primary_mechanisms.size()));
        counts[entry.condition].second.push_back(
            static_cast<double>(component_count(entry.design)));
    }
    for (const auto& condition : {std::string("real"), std::string("generated")}) {
        const auto it = counts.find(condition);
        if (it == counts.end()) continue;
        const auto& [mechanisms, components] = it->second;
        const auto sd = [](const std::vector<double>& v) {
            return v.size() > 1 ? std::sqrt(stats::sample_variance(v)) : 0.0;
        };
        report.structural_rows.push_back({condition, "mechanism_count",
                                          stats::mean(mechanisms), sd(mechanisms),
                                          static_cast<int>(mechanisms.size())});
        report.structural_rows.push_back({condition, "component_count",
                                          stats::mean(components), sd(components),
                                          static_cast<int>(components.size())});
    }

    std::ostringstream md;
    md << "# Benchmark study\n\n";
    md << "Reference designs vs generated designs, evaluated through the identical "
          "Design Coach pipeline.\n\n";
    md << "Completed: " << report.completed_runs << ", resumed: " << report.skipped_existing
       << ", exclusions: " << report.exclusions << "\n\n";
    if (!report.exclusion_notes.empty()) {
        md << "## Exclusions\n\n";
        for (const auto& note : report.exclusion_notes) md << "- " << note << "\n";
        md << "\n";
    }
    md << "## Creative metrics: real vs generated\n\n";
    md << "| Metric | Real | Generated | d | t | p | Sig |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& effect : report.effects) {
        md << "| " << effect.metric << " | " << fmt(effect.mean_a, 2) << " | "
           << fmt(effect.mean_b, 2) << " | " << fmt(effect.cohens_d, 2) << " | "
           << fmt(effect.t_statistic, 2) << " | " << fmt(effect.p_value, 4) << " | "
           << effect.significance << " |\n";
    }
    md << "\n## Structure counts\n\n";
    md << "| Group | Mechanisms (mean) | Components (mean) | n |\n|---|---|---|---|\n";
    for (const auto& condition : {std::string("real"), std::string("generated")}) {
        const auto mech = std::find_if(
            report.structural_rows.begin(), report.structural_rows.end(), [&](const auto& r) {
                return r.condition == condition && r.metric == "mechanism_count";
            });
        const auto comp = std::find_if(
            report.structural_rows.begin(), report.structural_rows.end(), [&](const auto& r) {
                return r.condition == condition && r.metric == "component_count";
            });
        if (mech == report.structural_rows.end() || comp == report.structural_rows.end()) {
            continue;
        }
        md << "| " << condition << " | " << fmt(mech->mean, 2) << " | " << fmt(comp->mean, 2)
           << " | " << mech->n << " |\n";
    }

    report.report_markdown = md.str();
    report.report_csv = coach::to_csv(records);
    write_text_file(run_dir / "report.md", report.report_markdown);
    write_text_file(run_dir / "report.csv", report.report_csv);
    return report;
}

// ---------------------------------------------------------------------------
// Reliability
// ---------------------------------------------------------------------------

StudyReport run_reliability(const std::vector<std::pair<std::string, GameDesign>>& designs,
                            const StudyPlan& plan, const StudyDeps& deps) {
    require(plan.study == StudyKind::reliability, "plan is not a reliability study");
    require(deps.transport != nullptr, "study needs a transport");
    require(plan.sessions >= 2, "reliability needs sessions >= 2");
    require(designs.size() >= 2, "reliability needs at least 2 designs");
    prepare_run_dir(plan, deps);

    StudyReport report;
    report.study = StudyKind::reliability;
    report.planned_runs = static_cast<int>(designs.size()) * plan.sessions;
    report.run_dir = deps.run_dir;

    const fs::path run_dir(deps.run_dir);
    const fs::path records_path = run_dir / "evaluations.jsonl";
    auto existing = load_existing_records(records_path);

    std::vector<coach::EvaluationRecord> records;
    for (const auto& [id, design] : designs) {
        for (int session = 1; session <= plan.sessions; ++session) {
            if (auto it = existing.find({id, session}); it != existing.end()) {
                records.push_back(it->second);
                ++report.skipped_existing;
                continue;
            }
            coach::EvaluationOutcome eval =
                coach::evaluate_design(design, id, "reliability", deps.evaluator,
                                       *deps.transport, deps.rubrics, deps.registry, session);
            if (!eval.ok()) {
                ++report.exclusions;
                report.exclusion_notes.push_back(id + " session " + std::to_string(session) +
                                                 ": " + eval.error);
                continue;
            }
            append_line(records_path, eval.record->to_json().dump());
            records.push_back(*eval.record);
        }
    }

    sort_records(records);
    report.records = records;
    report.completed_runs = static_cast<int>(records.size());

    // Only designs with every session present enter the (complete) matrix.
    std::vector<std::string> complete_ids;
    for (const auto& [id, design] : designs) {
        int count = 0;
        for (const auto& record : records) {
            if (record.design_id == id) ++count;
        }
        if (count == plan.sessions) {
            complete_ids.push_back(id);
        } else if (count > 0) {
            report.exclusion_notes.push_back(id + ": only " + std::to_string(count) + " of " +
                                             std::to_string(plan.sessions) +
                                             " sessions, dropped from ICC");
        }
    }

    for (const auto& metric : creative_metrics()) {
        IccRow row;
        row.metric = metric;
        if (complete_ids.size() >= 2) {
            Eigen::MatrixXd values(static_cast<Eigen::Index>(complete_ids.size()),
                                   plan.sessions);
            for (std::size_t i = 0; i < complete_ids.size(); ++i) {
                for (int session = 1; session <= plan.sessions; ++session) {
                    const auto record = std::find_if(
                        records.begin(), records.end(), [&](const auto& r) {
                            return r.design_id == complete_ids[i] && r.session == session;
                        });
                    values(static_cast<Eigen::Index>(i), session - 1) =
                        record->scorecard.metric(metric);
                }
            }
            stats::IccOptions options;
            options.metric = metric;
            if (plan.seed != 0) options.seed = static_cast<std::uint64_t>(plan.seed);
            try {
                row.report = stats::icc_2_1({values}, options);
            } catch (const std::domain_error& e) {
                row.note = e.what();
            }
        } else {
            row.note = "fewer than 2 complete designs";
        }
        report.icc_rows.push_back(std::move(row));
    }

    std::sort(report.icc_rows.begin(), report.icc_rows.end(),
              [](const IccRow& a, const IccRow& b) {
                  if (a.report.has_value() != b.report.has_value()) {
                      return a.report.has_value();
                  }
                  if (a.report && b.report && a.report->icc != b.report->icc) {
                      return a.report->icc > b.report->icc;
                  }
                  return a.metric < b.metric;
              });

    std::ostringstream md;
    md << "# Reliability study\n\n";
    md << designs.size() << " designs x " << plan.sessions << " sessions = "
       << report.planned_runs << " evaluations\n\n";
    md << "Completed: " << report.completed_runs << ", resumed: " << report.skipped_existing
       << ", exclusions: " << report.exclusions << "\n\n";
    if (!report.exclusion_notes.empty()) {
        md << "## Notes\n\n";
        for (const auto& note : report.exclusion_notes) md << "- " << note << "\n";
        md << "\n";
    }
    md << "## Test-retest reliability (ICC(2,1))\n\n";
    md << "| Metric | ICC(2,1) | 95% CI | Level |\n|---|---|---|---|\n";
    for (const auto& row : report.icc_rows) {
        if (row.report) {
            md << "| " << row.metric << " | " << fmt(row.report->icc, 3) << " | ["
               << fmt(row.report->ci_low, 3) << ", " << fmt(row.report->ci_high, 3) << "] | "
               << row.report->level << " |\n";
        } else {
            md << "| " << row.metric << " | undefined | - | " << row.note << " |\n";
        }
    }

    report.report_markdown = md.str();
    report.report_csv = coach::to_csv(records);
    write_text_file(run_dir / "report.md", report.report_markdown);
    write_text_file(run_dir / "report.csv", report.report_csv);
    return report;
}

StudyReport run_reliability(const StudyPlan& plan, const StudyDeps& deps) {
    require(plan.study == StudyKind::reliability, "plan is not a reliability study");
    std::vector<std::pair<std::string, GameDesign>> designs;
    StudyReport failures;
    for (const auto& path : sorted_json_files(plan.designs_dir)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        DesignParseResult parsed = parse_design(buffer.str());
        if (!parsed.ok()) {
            failures.exclusion_notes.push_back(path.filename().string() + ": " +
                                               parsed.failure.summary());
            ++failures.exclusions;
            continue;
        }
        designs.push_back({path.stem().string(), *parsed.design});
    }
    StudyReport report = run_reliability(designs, plan, deps);
    report.exclusions += failures.exclusions;
    for (auto& note : failures.exclusion_notes) {
        report.exclusion_notes.push_back(std::move(note));
    }
    return report;
}

}  // namespace gg::study

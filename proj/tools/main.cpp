// gamegrammar: generate, validate, retrieve, and study tabletop game designs.
//
// One binary with subcommands; JSON on stdout, diagnostics on stderr. Exit
// codes are stable contracts: generate 0/2 (retry exhaustion)/1, validate
// 0/3 (issues)/1, study 0/4 (exclusions)/1.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gamegrammar/agents.hpp"
#include "gamegrammar/coach.hpp"
#include "gamegrammar/config.hpp"
#include "gamegrammar/generation.hpp"
#include "gamegrammar/ontology.hpp"
#include "gamegrammar/retrieval.hpp"
#include "gamegrammar/study.hpp"
#include "gamegrammar/validation.hpp"

namespace fs = std::filesystem;
using namespace gg;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string mock_transcripts;
    int jobs = 0;  // 0 = take the config value
};

void add_global_options(CLI::App* cmd, GlobalOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Configuration file (JSON)");
    cmd->add_option("--mock-transcripts", opts.mock_transcripts,
                    "Replay provider responses from a JSONL transcript (offline)");
    cmd->add_option("--jobs", opts.jobs, "Cap on concurrent provider calls");
}

struct Runtime {
    AppConfig config;
    std::unique_ptr<generation::MockTransport> mock;
    std::unique_ptr<generation::HttpTransport> http;
    std::unique_ptr<generation::RequestGate> gate;
    std::unique_ptr<generation::GatedTransport> gated;
    generation::ChatTransport* transport = nullptr;
    agents::AgentRoster roster = agents::AgentRoster::defaults();
    validation::RuleRegistry registry = validation::RuleRegistry::extended();
    coach::CoachRubrics rubrics = coach::CoachRubrics::defaults();
};

bool setup_runtime(const GlobalOptions& opts, Runtime& rt) {
    std::string error;
    if (!opts.config_path.empty()) {
        auto loaded = AppConfig::load(opts.config_path, &error);
        if (!loaded) {
            std::cerr << "error: " << opts.config_path << ": " << error << "\n";
            return false;
        }
        rt.config = *loaded;
    } else {
        rt.config = AppConfig::defaults();
    }
    for (const auto& warning : rt.config.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }

    if (!opts.mock_transcripts.empty()) {
        rt.mock = std::make_unique<generation::MockTransport>();
        if (!rt.mock->load_script_file(opts.mock_transcripts, &error)) {
            std::cerr << "error: " << opts.mock_transcripts << ": " << error << "\n";
            return false;
        }
        rt.transport = rt.mock.get();
    } else {
        rt.http = std::make_unique<generation::HttpTransport>();
        rt.transport = rt.http.get();
    }
    const int jobs = opts.jobs > 0 ? opts.jobs : rt.config.jobs;
    rt.gate = std::make_unique<generation::RequestGate>(jobs);
    rt.gated = std::make_unique<generation::GatedTransport>(*rt.transport, *rt.gate);
    rt.transport = rt.gated.get();

    if (!rt.config.agent_spec_path.empty()) {
        auto roster = agents::AgentRoster::load(rt.config.agent_spec_path, &error);
        if (!roster) {
            std::cerr << "error: " << rt.config.agent_spec_path << ": " << error << "\n";
            return false;
        }
        rt.roster = *roster;
    }
    if (!rt.config.rule_registry_path.empty()) {
        try {
            rt.registry = validation::RuleRegistry::load(rt.config.rule_registry_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return false;
        }
    }
    return true;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool write_file(const std::string& path, const std::string& content) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    out << content;
    return true;
}

bool load_corpus(const std::string& path, const retrieval::Embedder& embedder,
                 retrieval::CorpusIndex& index) {
    const auto report = index.ingest_file(path, embedder);
    for (const auto& err : report.errors) {
        std::cerr << "warning: " << path << ":" << err.line << ": " << err.message << "\n";
    }
    if (report.fatal) {
        std::cerr << "error: " << path << ": "
                  << (report.errors.empty() ? "corpus rejected"
                                            : report.errors.back().message)
                  << "\n";
        return false;
    }
    return true;
}

// Retry exhaustion is a distinct outcome (exit 2); config and transport
// failures exit 1.
int failure_exit_code(const std::string& error) {
    return error.find("transport error") != std::string::npos ? 1 : 2;
}

int cmd_generate(const GlobalOptions& opts, const std::string& theme,
                 const std::string& constraints, const std::string& condition_token,
                 const std::string& out_path, const std::string& corpus_flag, bool no_rag) {
    Runtime rt;
    if (!setup_runtime(opts, rt)) return 1;

    const auto condition = agents::condition_from_string(condition_token);
    if (!condition) {
        std::cerr << "error: unknown condition \"" << condition_token << "\"\n";
        return 1;
    }

    std::string context;
    if (*condition == agents::Condition::C4 && !no_rag) {
        std::string corpus_path = corpus_flag;
        if (corpus_path.empty() && rt.config.corpus_path) {
            corpus_path = *rt.config.corpus_path;
        }
        if (corpus_path.empty()) {
            std::cerr << "error: condition C4 needs a corpus (--corpus or config "
                         "corpus_path) unless --no-rag is given\n";
            return 1;
        }
        retrieval::HashingEmbedder embedder;
        retrieval::CorpusIndex index;
        if (!load_corpus(corpus_path, embedder, index)) return 1;
        retrieval::RetrievalQuery query;
        query.theme_text = theme;
        query.top_k = 3;
        context = retrieval::format_precedents(index.retrieve(query, embedder));
    }

    fs::path record_path(out_path);
    record_path.replace_extension(".run.json");

    if (*condition == agents::Condition::C4) {
        agents::PipelineRun run =
            agents::run_pipeline(theme, constraints, rt.config.provider, *rt.transport,
                                 rt.roster, rt.registry, context);
        write_file(record_path.string(), run.to_json().dump(2) + "\n");
        if (!run.ok()) {
            std::cerr << "error: " << run.error << "\n";
            return failure_exit_code(run.error);
        }
        if (!write_file(out_path, serialize_design(*run.final_design))) return 1;
        Json line = {{"ok", true},
                     {"condition", "C4"},
                     {"design", out_path},
                     {"refined", run.refined},
                     {"fun_rating", run.fun_rating()},
                     {"total_tokens", run.total_tokens()}};
        std::cout << line.dump() << "\n";
        return 0;
    }

    generation::GenerationOutcome outcome = agents::single_agent_generate(
        theme, constraints, rt.config.provider, *rt.transport, *condition, rt.registry);
    Json record = {{"ok", outcome.error.empty()},
                   {"condition", agents::to_string(*condition)},
                   {"attempts", outcome.attempts.size()},
                   {"prompt_tokens", outcome.prompt_tokens},
                   {"completion_tokens", outcome.completion_tokens},
                   {"total_tokens", outcome.total_tokens()},
                   {"tokens_estimated", outcome.tokens_estimated}};
    if (!outcome.error.empty()) record["error"] = outcome.error;
    write_file(record_path.string(), record.dump(2) + "\n");

    if (*condition == agents::Condition::C1) {
        if (!outcome.error.empty()) {
            std::cerr << "error: " << outcome.error << "\n";
            return failure_exit_code(outcome.error);
        }
        if (!write_file(out_path, outcome.attempts.back().raw_response)) return 1;
    } else {
        if (!outcome.ok()) {
            std::cerr << "error: " << outcome.error << "\n";
            return failure_exit_code(outcome.error);
        }
        if (!write_file(out_path, serialize_design(*outcome.design))) return 1;
    }
    Json line = {{"ok", true},
                 {"condition", agents::to_string(*condition)},
                 {"design", out_path},
                 {"total_tokens", outcome.total_tokens()}};
    std::cout << line.dump() << "\n";
    return 0;
}

int cmd_validate(const GlobalOptions& opts, const std::string& design_path) {
    Runtime rt;
    if (!setup_runtime(opts, rt)) return 1;

    const auto text = read_file(design_path);
    if (!text) {
        std::cerr << "error: cannot read " << design_path << "\n";
        return 1;
    }
    Json doc = Json::parse(*text, nullptr, false);
    if (doc.is_discarded()) {
        std::cerr << "error: " << design_path << " is not valid JSON\n";
        return 1;
    }
    const validation::ValidationReport report = validation::validate_raw(*text, rt.registry);
    std::cout << report.to_json().dump(2) << "\n";
    return report.issues.empty() ? 0 : 3;
}

int cmd_corpus_ingest(const GlobalOptions& opts, const std::string& input_path,
                      const std::string& snapshot_path) {
    Runtime rt;
    if (!setup_runtime(opts, rt)) return 1;

    retrieval::HashingEmbedder embedder;
    retrieval::CorpusIndex index;
    if (!load_corpus(input_path, embedder, index)) return 1;
    if (!snapshot_path.empty() && !write_file(snapshot_path, index.save_snapshot())) {
        return 1;
    }
    std::cout << index.size() << " records indexed\n";
    return 0;
}

int cmd_corpus_search(const GlobalOptions& opts, const std::string& corpus_flag,
                      const std::string& theme, const std::vector<std::string>& mechanisms,
                      int top_k, const std::vector<int>& players,
                      const std::vector<double>& weights) {
    Runtime rt;
    if (!setup_runtime(opts, rt)) return 1;

    std::string corpus_path = corpus_flag;
    if (corpus_path.empty() && rt.config.corpus_path) corpus_path = *rt.config.corpus_path;
    if (corpus_path.empty()) {
        std::cerr << "error: no corpus given (--corpus or config corpus_path)\n";
        return 1;
    }

    retrieval::RetrievalQuery query;
    query.theme_text = theme;
    query.top_k = top_k;
    for (const auto& token : mechanisms) {
        const auto kind = mechanism_from_string(token);
        if (!kind) {
            std::cerr << "error: unknown mechanism \"" << token << "\"\n";
            return 1;
        }
        query.target_mechanisms.push_back(*kind);
    }
    if (!players.empty()) query.player_range = {players[0], players[1]};
    if (!weights.empty()) query.weight_range = {weights[0], weights[1]};

    retrieval::HashingEmbedder embedder;
    retrieval::CorpusIndex index;
    if (!load_corpus(corpus_path, embedder, index)) return 1;

    for (const auto& game : index.retrieve(query, embedder)) {
        Json line;
        line["id"] = game.record.id;
        line["name"] = game.record.name;
        line["similarity"] = game.similarity;
        line["shared_mechanisms"] = Json::array();
        for (const auto kind : game.shared_mechanisms) {
            line["shared_mechanisms"].push_back(to_string(kind));
        }
        line["players"] = {game.record.min_players, game.record.max_players};
        std::cout << line.dump() << "\n";
    }
    return 0;
}

int cmd_study(const GlobalOptions& opts, const std::string& plan_path,
              const std::string& run_dir, const std::string& corpus_flag, bool no_rag) {
    Runtime rt;
    if (!setup_runtime(opts, rt)) return 1;

    std::string error;
    const auto plan = study::StudyPlan::load(plan_path, &error);
    if (!plan) {
        std::cerr << "error: " << plan_path << ": " << error << "\n";
        return 1;
    }

    study::StudyDeps deps;
    deps.provider = rt.config.provider;
    deps.evaluator = rt.config.evaluator;
    deps.transport = rt.transport;
    deps.roster = rt.roster;
    deps.registry = rt.registry;
    deps.rubrics = rt.rubrics;
    deps.run_dir = run_dir;
    deps.no_rag = no_rag;

    retrieval::HashingEmbedder embedder;
    retrieval::CorpusIndex index;
    std::string corpus_path = corpus_flag;
    if (corpus_path.empty() && rt.config.corpus_path) corpus_path = *rt.config.corpus_path;
    if (!corpus_path.empty() && !no_rag) {
        if (!load_corpus(corpus_path, embedder, index)) return 1;
        deps.corpus = &index;
        deps.embedder = &embedder;
    }

    study::StudyReport report;
    try {
        switch (plan->study) {
            case study::StudyKind::ablation:
                report = study::run_ablation(*plan, deps);
                break;
            case study::StudyKind::benchmark:
                report = study::run_benchmark(*plan, deps);
                break;
            case study::StudyKind::reliability:
                report = study::run_reliability(*plan, deps);
                break;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    Json line = {{"study", study::to_string(report.study)},
                 {"planned", report.planned_runs},
                 {"completed", report.completed_runs},
                 {"resumed", report.skipped_existing},
                 {"exclusions", report.exclusions},
                 {"report", (fs::path(report.run_dir) / "report.md").string()}};
    std::cout << line.dump() << "\n";
    for (const auto& note : report.exclusion_notes) {
        std::cerr << "excluded: " << note << "\n";
    }
    return report.exclusions == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Typed game-design generation, validation, retrieval, and studies"};
    app.require_subcommand(1);

    GlobalOptions opts;

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a game design");
    std::string theme, constraints, condition = "C4", out_path = "design.json";
    std::string gen_corpus;
    bool gen_no_rag = false;
    generate->add_option("--theme", theme, "Thematic concept")->required();
    generate->add_option("--constraints", constraints,
                         "Player count, complexity, play time");
    generate->add_option("--condition", condition, "Generation condition (C1..C4)");
    generate->add_option("--out", out_path, "Output design path");
    generate->add_option("--corpus", gen_corpus, "Corpus JSONL for design precedents");
    generate->add_flag("--no-rag", gen_no_rag, "Skip precedent retrieval");
    add_global_options(generate, opts);

    // validate
    auto* validate = app.add_subcommand("validate", "Validate a design file");
    std::string design_path;
    validate->add_option("design", design_path, "Design JSON path")->required();
    add_global_options(validate, opts);

    // corpus ingest | corpus search
    auto* corpus = app.add_subcommand("corpus", "Corpus operations");
    corpus->require_subcommand(1);
    auto* ingest = corpus->add_subcommand("ingest", "Build an index from JSONL");
    std::string ingest_input, ingest_out;
    ingest->add_option("input", ingest_input, "Corpus JSONL path")->required();
    ingest->add_option("--out", ingest_out, "Snapshot output path");
    add_global_options(ingest, opts);

    auto* search = corpus->add_subcommand("search", "Rank corpus records for a theme");
    std::string search_corpus, search_theme;
    std::vector<std::string> search_mechanisms;
    std::vector<int> search_players;
    std::vector<double> search_weights;
    int search_top_k = 3;
    search->add_option("--corpus", search_corpus, "Corpus JSONL path");
    search->add_option("--theme", search_theme, "Theme text")->required();
    search->add_option("--mechanism", search_mechanisms, "Target mechanism (repeatable)");
    search->add_option("--top-k", search_top_k, "Result count");
    search->add_option("--players", search_players, "Player range filter: min max")
        ->expected(2);
    search->add_option("--weight", search_weights, "Weight range filter: low high")
        ->expected(2);
    add_global_options(search, opts);

    // study
    auto* study_cmd = app.add_subcommand("study", "Execute a study plan");
    std::string plan_path, run_dir = "study-run", study_corpus;
    bool study_no_rag = false;
    study_cmd->add_option("plan", plan_path, "Study plan JSON path")->required();
    study_cmd->add_option("--run-dir", run_dir, "Artifact directory");
    study_cmd->add_option("--corpus", study_corpus, "Corpus JSONL for C4 precedents");
    study_cmd->add_flag("--no-rag", study_no_rag, "Skip precedent retrieval");
    add_global_options(study_cmd, opts);

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        return cmd_generate(opts, theme, constraints, condition, out_path, gen_corpus,
                            gen_no_rag);
    }
    if (validate->parsed()) return cmd_validate(opts, design_path);
    if (corpus->parsed()) {
        if (ingest->parsed()) return cmd_corpus_ingest(opts, ingest_input, ingest_out);
        if (search->parsed()) {
            return cmd_corpus_search(opts, search_corpus, search_theme, search_mechanisms,
                                     search_top_k, search_players, search_weights);
        }
    }
    if (study_cmd->parsed()) {
        return cmd_study(opts, plan_path, run_dir, study_corpus, study_no_rag);
    }
    return 1;
}

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamegrammar/ontology.hpp"

namespace gg::retrieval {

inline constexpr int kEmbeddingDim = 384;
inline constexpr const char* kCorpusHeader = "gg-corpus-v1";

// One corpus entry. Embeddings are L2-normalized at ingest time so ranking
// can use a plain dot product.
struct GameRecord {
    std::string id;
    std::string name;
    std::optional<int> year;
    std::vector<MechanismKind> mechanisms;
    std::string description;
    int min_players = 1;
    int max_players = 1;
    std::optional<double> weight;  // complexity rating, absent for some entries
    Eigen::VectorXd embedding;     // size kEmbeddingDim, unit norm
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Eigen::VectorXd embed(const std::string& text) const = 0;
};

// Deterministic feature-hashing embedder. Tokens are lowercased alnum runs,
// hashed with FNV-1a 64 into kEmbeddingDim buckets with alternating sign,
// then the vector is L2-normalized. Zero-token text maps to the first basis
// vector so every input yields a valid unit embedding.
class HashingEmbedder : public Embedder {
public:
    Eigen::VectorXd embed(const std::string& text) const override;
};

struct RetrievalQuery {
    std::string theme_text;
    std::vector<MechanismKind> target_mechanisms;
    int top_k = 3;
    // Optional phase-1 filters. A record passes the player filter when its
    // player range overlaps the queried range, and the weight filter when it
    // has a weight inside the queried range.
    std::optional<std::pair<int, int>> player_range;
    std::optional<std::pair<double, double>> weight_range;
};

struct RetrievedGame {
    GameRecord record;
    double similarity = 0.0;
    // Mechanisms shared with the query, in the record's order. Empty for
    // entries admitted only by the fallback widening.
    std::vector<MechanismKind> shared_mechanisms;
};

struct IngestError {
    int line = 0;  // 1-based line number in the source
    std::string message;
};

struct IngestReport {
    int accepted = 0;
    std::vector<IngestError> errors;  // skipped lines (ingest continued)
    bool fatal = false;               // duplicate id or bad header: index unchanged
    bool ok() const { return !fatal && errors.empty(); }
};

class CorpusIndex {
public:
    // Parses JSONL corpus text. The first non-blank line must be the header
    // "gg-corpus-v1". Malformed lines are reported and skipped; a duplicate
    // id or a bad header is fatal and leaves the index unchanged. On success
    // the parsed records replace any previous contents.
    IngestReport ingest(const std::string& jsonl_text, const Embedder& embedder);
    IngestReport ingest_file(const std::string& path, const Embedder& embedder);

    // Phase 1 keeps records sharing at least one target mechanism and
    // passing the optional filters. Phase 2 ranks survivors by cosine
    // similarity against embedder(theme_text). When phase 1 leaves fewer
    // than top_k records the ranking widens to the whole corpus; widened
    // entries get empty shared_mechanisms and sort below filter survivors
    // at equal similarity. Final order: similarity descending, survivors
    // above widened entries, id ascending.
    std::vector<RetrievedGame> retrieve(const RetrievalQuery& query,
                                        const Embedder& embedder) const;

    const std::vector<GameRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Header line plus one JSON object per record, embeddings included, so
    // a snapshot reloads without re-embedding.
    std::string save_snapshot() const;

private:
    std::vector<GameRecord> records_;
};

// Renders a retrieval result as a prompt fragment: per record its name,
// player range, mechanisms, shared mechanisms, and a single-line
// description excerpt capped at 200 characters on a word boundary.
// Empty result renders as empty text.
std::string format_precedents(const std::vector<RetrievedGame>& games);

}  // namespace gg::retrieval

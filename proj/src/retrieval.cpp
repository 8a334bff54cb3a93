#include "gamegrammar/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gg::retrieval {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// HashingEmbedder
// ---------------------------------------------------------------------------

Eigen::VectorXd HashingEmbedder::embed(const std::string& text) const {
    Eigen::VectorXd vec = Eigen::VectorXd::Zero(kEmbeddingDim);
    bool any_token = false;

    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        any_token = true;
        // FNV-1a 64
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : token) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        const auto bucket = static_cast<Eigen::Index>(h % kEmbeddingDim);
        const double sign = ((h >> 63) & 1ULL) ? -1.0 : 1.0;
        vec[bucket] += sign;
        token.clear();
    };

    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            token.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();

    if (!any_token) {
        vec[0] = 1.0;
        return vec;
    }
    const double norm = vec.norm();
    if (norm == 0.0) {
        // Signed buckets cancelled out entirely; fall back to the basis vector.
        vec.setZero();
        vec[0] = 1.0;
        return vec;
    }
    return vec / norm;
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace {

struct LineParse {
    std::optional<GameRecord> record;
    std::string error;
};

std::string trimmed(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

LineParse parse_record_line(const std::string& line, const Embedder& embedder) {
    Json doc = Json::parse(line, nullptr, false);
    if (doc.is_discarded()) return {std::nullopt, "invalid JSON"};
    if (!doc.is_object()) return {std::nullopt, "record must be a JSON object"};

    GameRecord rec;
    if (!doc.contains("id") || !doc["id"].is_string() || doc["id"].get<std::string>().empty()) {
        return {std::nullopt, "missing or empty \"id\""};
    }
    rec.id = doc["id"].get<std::string>();
    if (!doc.contains("name") || !doc["name"].is_string()) {
        return {std::nullopt, "missing \"name\""};
    }
    rec.name = doc["name"].get<std::string>();
    if (doc.contains("year") && !doc["year"].is_null()) {
        if (!doc["year"].is_number_integer()) return {std::nullopt, "\"year\" must be an integer"};
        rec.year = doc["year"].get<int>();
    }
    if (!doc.contains("mechanisms") || !doc["mechanisms"].is_array()) {
        return {std::nullopt, "missing \"mechanisms\" array"};
    }
    for (const auto& item : doc["mechanisms"]) {
        if (!item.is_string()) return {std::nullopt, "mechanism entries must be strings"};
        auto kind = mechanism_from_string(item.get<std::string>());
        if (!kind) return {std::nullopt, "unknown mechanism \"" + item.get<std::string>() + "\""};
        rec.mechanisms.push_back(*kind);
    }
    if (!doc.contains("description") || !doc["description"].is_string()) {
        return {std::nullopt, "missing \"description\""};
    }
    rec.description = doc["description"].get<std::string>();
    if (!doc.contains("min_players") || !doc["min_players"].is_number_integer() ||
        !doc.contains("max_players") || !doc["max_players"].is_number_integer()) {
        return {std::nullopt, "missing integer \"min_players\"/\"max_players\""};
    }
    rec.min_players = doc["min_players"].get<int>();
    rec.max_players = doc["max_players"].get<int>();
    if (rec.min_players < 1 || rec.max_players < rec.min_players) {
        return {std::nullopt, "invalid player range"};
    }
    if (doc.contains("weight") && !doc["weight"].is_null()) {
        if (!doc["weight"].is_number()) return {std::nullopt, "\"weight\" must be a number"};
        rec.weight = doc["weight"].get<double>();
    }

    if (doc.contains("embedding") && !doc["embedding"].is_null()) {
        const auto& arr = doc["embedding"];
        if (!arr.is_array() || arr.size() != static_cast<std::size_t>(kEmbeddingDim)) {
            return {std::nullopt,
                    "\"embedding\" must hold exactly " + std::to_string(kEmbeddingDim) + " numbers"};
        }
        rec.embedding.resize(kEmbeddingDim);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number()) return {std::nullopt, "\"embedding\" must hold only numbers"};
            rec.embedding[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
        }
        const double norm = rec.embedding.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            return {std::nullopt, "\"embedding\" has no positive finite norm"};
        }
        rec.embedding /= norm;
    } else {
        rec.embedding = embedder.embed(rec.description);
    }
    return {std::move(rec), ""};
}

}  // namespace

IngestReport CorpusIndex::ingest(const std::string& jsonl_text, const Embedder& embedder) {
    IngestReport report;
    std::vector<GameRecord> parsed;

    std::istringstream stream(jsonl_text);
    std::string line;
    int line_number = 0;
    bool header_seen = false;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::string content = trimmed(line);
        if (content.empty()) continue;
        if (!header_seen) {
            if (content != kCorpusHeader) {
                report.fatal = true;
                report.errors.push_back(
                    {line_number, std::string("expected header \"") + kCorpusHeader + "\""});
                return report;
            }
            header_seen = true;
            continue;
        }
        LineParse result = parse_record_line(content, embedder);
        if (!result.record) {
            report.errors.push_back({line_number, result.error});
            continue;
        }
        const auto duplicate =
            std::find_if(parsed.begin(), parsed.end(),
                         [&](const GameRecord& r) { return r.id == result.record->id; });
        if (duplicate != parsed.end()) {
            report.fatal = true;
            report.errors.push_back({line_number, "duplicate id \"" + result.record->id + "\""});
            return report;
        }
        parsed.push_back(std::move(*result.record));
    }
    if (!header_seen) {
        report.fatal = true;
        report.errors.push_back({0, std::string("missing header \"") + kCorpusHeader + "\""});
        return report;
    }
    report.accepted = static_cast<int>(parsed.size());
    records_ = std::move(parsed);
    return report;
}

IngestReport CorpusIndex::ingest_file(const std::string& path, const Embedder& embedder) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        IngestReport report;
        report.fatal = true;
        report.errors.push_back({0, "cannot open " + path});
        return report;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingest(buffer.str(), embedder);
}

// ---------------------------------------------------------------------------
// Retrieval
// ---------------------------------------------------------------------------

namespace {

std::vector<MechanismKind> shared_with(const GameRecord& record,
                                       const std::vector<MechanismKind>& targets) {
    std::vector<MechanismKind> shared;
    for (MechanismKind m : record.mechanisms) {
        const bool targeted = std::find(targets.begin(), targets.end(), m) != targets.end();
        const bool seen = std::find(shared.begin(), shared.end(), m) != shared.end();
        if (targeted && !seen) shared.push_back(m);
    }
    return shared;
}

bool passes_filters(const GameRecord& record, const RetrievalQuery& query) {
    if (query.player_range) {
        const auto [lo, hi] = *query.player_range;
        if (record.max_players < lo || record.min_players > hi) return false;
    }
    if (query.weight_range) {
        if (!record.weight) return false;
        const auto [lo, hi] = *query.weight_range;
        if (*record.weight < lo || *record.weight > hi) return false;
    }
    return true;
}

}  // namespace

std::vector<RetrievedGame> CorpusIndex::retrieve(const RetrievalQuery& query,
                                                 const Embedder& embedder) const {
    if (records_.empty()) return {};
    const Eigen::VectorXd theme = embedder.embed(query.theme_text);

    std::vector<RetrievedGame> candidates;
    candidates.reserve(records_.size());
    std::size_t survivors = 0;
    for (const auto& record : records_) {
        RetrievedGame entry;
        entry.record = record;
        entry.similarity = record.embedding.dot(theme);
        entry.shared_mechanisms = shared_with(record, query.target_mechanisms);
        if (entry.shared_mechanisms.empty() || !passes_filters(record, query)) {
            entry.shared_mechanisms.clear();
        } else {
            ++survivors;
        }
        candidates.push_back(std::move(entry));
    }

    const bool fallback = survivors < static_cast<std::size_t>(query.top_k);
    if (!fallback) {
        candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                        [](const RetrievedGame& g) {
                                            return g.shared_mechanisms.empty();
                                        }),
                         candidates.end());
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const RetrievedGame& a, const RetrievedGame& b) {
                  if (a.similarity != b.similarity) return a.similarity > b.similarity;
                  const bool a_matched = !a.shared_mechanisms.empty();
                  const bool b_matched = !b.shared_mechanisms.empty();
                  if (a_matched != b_matched) return a_matched;
                  return a.record.id < b.record.id;
              });
    if (candidates.size() > static_cast<std::size_t>(query.top_k)) {
        candidates.resize(static_cast<std::size_t>(query.top_k));
    }
    return candidates;
}

// ---------------------------------------------------------------------------
// Snapshot and prompt formatting
// ---------------------------------------------------------------------------

std::string CorpusIndex::save_snapshot() const {
    std::string out = std::string(kCorpusHeader) + "\n";
    for (const auto& record : records_) {
        Json doc;
        doc["id"] = record.id;
        doc["name"] = record.name;
        if (record.year) doc["year"] = *record.year;
        doc["mechanisms"] = Json::array();
        for (MechanismKind m : record.mechanisms) doc["mechanisms"].push_back(to_string(m));
        doc["description"] = record.description;
        doc["min_players"] = record.min_players;
        doc["max_players"] = record.max_players;
        if (record.weight) doc["weight"] = *record.weight;
        doc["embedding"] = Json::array();
        for (Eigen::Index i = 0; i < record.embedding.size(); ++i) {
            doc["embedding"].push_back(record.embedding[i]);
        }
        out += doc.dump();
        out += "\n";
    }
    return out;
}

namespace {

std::string one_line_excerpt(const std::string& description, std::size_t limit) {
    std::string flat;
    flat.reserve(description.size());
    bool last_space = false;
    for (char c : description) {
        const bool ws = (c == ' ' || c == '\t' || c == '\r' || c == '\n');
        if (ws) {
            if (!flat.empty() && !last_space) flat.push_back(' ');
            last_space = true;
        } else {
            flat.push_back(c);
            last_space = false;
        }
    }
    while (!flat.empty() && flat.back() == ' ') flat.pop_back();
    if (flat.size() <= limit) return flat;

    std::size_t cut = flat.rfind(' ', limit);
    if (cut == std::string::npos || cut == 0) cut = limit;
    std::string excerpt = flat.substr(0, cut);
    while (!excerpt.empty() && excerpt.back() == ' ') excerpt.pop_back();
    return excerpt;
}

std::string mechanism_list(const std::vector<MechanismKind>& mechanisms) {
    if (mechanisms.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < mechanisms.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(mechanisms[i]);
    }
    return out;
}

}  // namespace

std::string format_precedents(const std::vector<RetrievedGame>& games) {
    if (games.empty()) return "";
    std::string out = "Design precedents from published games:\n";
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto& g = games[i];
        out += std::to_string(i + 1) + ". " + g.record.name + " (players " +
               std::to_string(g.record.min_players) + "-" +
               std::to_string(g.record.max_players) + ")\n";
        out += "   Mechanisms: " + mechanism_list(g.record.mechanisms) + "\n";
        out += "   Shared with this design: " + mechanism_list(g.shared_mechanisms) + "\n";
        out += "   Summary: " + one_line_excerpt(g.record.description, 200) + "\n";
    }
    return out;
}

}  // namespace gg::retrieval

#include "doctest.h"
#include "gamegrammar/retrieval.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace gg;
using namespace gg::retrieval;

namespace {

std::string corpus_line(const std::string& id, const std::string& name,
                        const std::vector<std::string>& mechanisms,
                        const std::string& description, int min_players, int max_players,
                        std::optional<double> weight = std::nullopt) {
    Json doc;
    doc["id"] = id;
    doc["name"] = name;
    doc["mechanisms"] = mechanisms;
    doc["description"] = description;
    doc["min_players"] = min_players;
    doc["max_players"] = max_players;
    if (weight) doc["weight"] = *weight;
    return doc.dump();
}

struct RandomCorpus {
    std::string jsonl;
    int count = 0;
};

RandomCorpus random_corpus(std::mt19937_64& rng, int max_records) {
    static const std::vector<std::string> words = {
        "fungi",   "cave",    "trade",  "ship",    "castle", "garden", "gear",
        "market",  "tunnel",  "harbor", "spore",   "relic",  "storm",  "lantern",
        "caravan", "orchard", "reef",   "volcano", "glacier", "meadow",
    };
    std::uniform_int_distribution<int> count_dist(1, max_records);
    std::uniform_int_distribution<int> word_dist(0, static_cast<int>(words.size()) - 1);
    std::uniform_int_distribution<int> mech_count(1, 4);
    std::uniform_int_distribution<int> mech_dist(0, kMechanismCount - 1);
    std::uniform_int_distribution<int> min_dist(1, 4);
    std::uniform_int_distribution<int> span_dist(0, 4);
    std::uniform_real_distribution<double> weight_dist(1.0, 5.0);
    std::bernoulli_distribution has_weight(0.7);

    RandomCorpus corpus;
    corpus.count = count_dist(rng);
    std::ostringstream out;
    out << kCorpusHeader << "\n";
    for (int i = 0; i < corpus.count; ++i) {
        std::set<std::string> mechanisms;
        const int m = mech_count(rng);
        while (static_cast<int>(mechanisms.size()) < m) {
            mechanisms.insert(to_string(static_cast<MechanismKind>(mech_dist(rng))));
        }
        std::string description;
        for (int w = 0; w < 6; ++w) {
            if (w) description += " ";
            description += words[word_dist(rng)];
        }
        const int lo = min_dist(rng);
        char id[16];
        std::snprintf(id, sizeof id, "g%03d", i);
        out << corpus_line(id, "Game " + std::to_string(i),
                           {mechanisms.begin(), mechanisms.end()}, description, lo,
                           lo + span_dist(rng),
                           has_weight(rng) ? std::optional<double>(weight_dist(rng))
                                           : std::nullopt)
            << "\n";
    }
    corpus.jsonl = out.str();
    return corpus;
}

RetrievalQuery random_query(std::mt19937_64& rng) {
    static const std::vector<std::string> themes = {
        "fungi growing in a dark cave", "trading ships across a stormy harbor",
        "tending a mountain garden",    "clockwork gears in a tower",
        "caravan crossing the glacier",
    };
    std::uniform_int_distribution<int> theme_dist(0, static_cast<int>(themes.size()) - 1);
    std::uniform_int_distribution<int> k_dist(1, 8);
    std::uniform_int_distribution<int> mech_dist(0, kMechanismCount - 1);
    std::uniform_int_distribution<int> target_count(0, 3);
    std::bernoulli_distribution coin(0.4);

    RetrievalQuery q;
    q.theme_text = themes[theme_dist(rng)];
    q.top_k = k_dist(rng);
    const int targets = target_count(rng);
    for (int i = 0; i < targets; ++i) {
        const auto kind = static_cast<MechanismKind>(mech_dist(rng));
        if (std::find(q.target_mechanisms.begin(), q.target_mechanisms.end(), kind) ==
            q.target_mechanisms.end()) {
            q.target_mechanisms.push_back(kind);
        }
    }
    if (coin(rng)) {
        std::uniform_int_distribution<int> lo_dist(1, 4);
        const int lo = lo_dist(rng);
        q.player_range = {lo, lo + 2};
    }
    if (coin(rng)) q.weight_range = {1.5, 3.5};
    return q;
}

// Exhaustive reference: same cosine arithmetic, independently written
// filter, fallback, ordering, and truncation logic.
std::vector<std::string> oracle_retrieve(const std::vector<GameRecord>& records,
                                         const RetrievalQuery& q, const Embedder& embedder) {
    const Eigen::VectorXd theme = embedder.embed(q.theme_text);

    struct Row {
        const GameRecord* r;
        double sim;
        bool matched;
    };
    std::vector<Row> rows;
    for (const auto& record : records) {
        bool shares = false;
        for (auto m : record.mechanisms) {
            for (auto t : q.target_mechanisms) {
                if (m == t) shares = true;
            }
        }
        bool passes = true;
        if (q.player_range) {
            if (record.max_players < q.player_range->first ||
                record.min_players > q.player_range->second) {
                passes = false;
            }
        }
        if (q.weight_range) {
            if (!record.weight || *record.weight < q.weight_range->first ||
                *record.weight > q.weight_range->second) {
                passes = false;
            }
        }
        rows.push_back({&record, record.embedding.dot(theme), shares && passes});
    }

    int survivors = 0;
    for (const auto& row : rows) survivors += row.matched ? 1 : 0;
    const bool fallback = survivors < q.top_k;
    if (!fallback) {
        std::vector<Row> kept;
        for (const auto& row : rows) {
            if (row.matched) kept.push_back(row);
        }
        rows = kept;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.matched != b.matched) return a.matched;
        return a.r->id < b.r->id;
    });
    if (static_cast<int>(rows.size()) > q.top_k) rows.resize(q.top_k);

    std::vector<std::string> ids;
    for (const auto& row : rows) ids.push_back(row.r->id);
    return ids;
}

}  // namespace

TEST_CASE("hashing embedder is deterministic, unit-norm, case-insensitive") {
    HashingEmbedder embedder;
    const auto a = embedder.embed("Bioluminescent fungi in a cave");
    const auto b = embedder.embed("bioluminescent FUNGI in a cave");
    CHECK(a.size() == kEmbeddingDim);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((a - b).norm() == doctest::Approx(0.0));

    const auto c = embedder.embed("completely different text about spaceships");
    CHECK((a - c).norm() > 1e-6);

    // Tokenization splits on non-alphanumerics.
    const auto d = embedder.embed("fungi-cave");
    const auto e = embedder.embed("fungi cave");
    CHECK((d - e).norm() == doctest::Approx(0.0));

    SUBCASE("zero tokens fall back to the first basis vector") {
        const auto empty = embedder.embed("");
        const auto punct = embedder.embed("!!! ---");
        CHECK(empty[0] == doctest::Approx(1.0));
        CHECK(empty.norm() == doctest::Approx(1.0));
        CHECK((empty - punct).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("ingest enforces the corpus contract") {
    HashingEmbedder embedder;

    SUBCASE("happy path") {
        CorpusIndex index;
        std::string text = std::string(kCorpusHeader) + "\n" +
                           corpus_line("a1", "Alpha", {"deck_building"}, "draft and build", 2,
                                       4, 2.5) +
                           "\n\n" +
                           corpus_line("b2", "Beta", {"area_control", "action_points"},
                                       "contest the map", 3, 5) +
                           "\n";
        const auto report = index.ingest(text, embedder);
        CHECK(report.ok());
        CHECK(report.accepted == 2);
        REQUIRE(index.size() == 2);
        CHECK(index.records()[0].id == "a1");
        CHECK(index.records()[0].weight == doctest::Approx(2.5));
        CHECK_FALSE(index.records()[1].weight.has_value());
        CHECK(index.records()[0].embedding.norm() == doctest::Approx(1.0));
    }
    SUBCASE("missing header is fatal") {
        CorpusIndex index;
        const auto report =
            index.ingest(corpus_line("a1", "Alpha", {"deck_building"}, "x", 2, 4) + "\n",
                         embedder);
        CHECK(report.fatal);
        CHECK(index.empty());
    }
    SUBCASE("duplicate id is fatal and leaves the index unchanged") {
        CorpusIndex index;
        std::string good = std::string(kCorpusHeader) + "\n" +
                           corpus_line("a1", "Alpha", {"deck_building"}, "x", 2, 4) + "\n";
        REQUIRE(index.ingest(good, embedder).ok());
        REQUIRE(index.size() == 1);

        std::string dupe = std::string(kCorpusHeader) + "\n" +
                           corpus_line("z9", "Zeta", {"set_collection"}, "y", 2, 4) + "\n" +
                           corpus_line("z9", "Zeta Again", {"set_collection"}, "y", 2, 4) +
                           "\n";
        const auto report = index.ingest(dupe, embedder);
        CHECK(report.fatal);
        CHECK(index.size() == 1);  // previous contents kept
        CHECK(index.records()[0].id == "a1");
    }
    SUBCASE("malformed lines are skipped with their line numbers") {
        CorpusIndex index;
        std::string text = std::string(kCorpusHeader) + "\n" +
                           corpus_line("a1", "Alpha", {"deck_building"}, "x", 2, 4) + "\n" +
                           "{\"id\": \"broken\"}\n" +
                           "not json\n" +
                           corpus_line("b2", "Beta", {"area_control"}, "y", 2, 4) + "\n";
        const auto report = index.ingest(text, embedder);
        CHECK_FALSE(report.fatal);
        CHECK(report.accepted == 2);
        REQUIRE(report.errors.size() == 2);
        CHECK(report.errors[0].line == 3);
        CHECK(report.errors[1].line == 4);
        CHECK(index.size() == 2);
    }
    SUBCASE("unknown mechanisms and invalid player ranges are line errors") {
        CorpusIndex index;
        std::string text = std::string(kCorpusHeader) + "\n" +
                           corpus_line("a1", "Alpha", {"roll_and_move"}, "x", 2, 4) + "\n" +
                           corpus_line("b2", "Beta", {"area_control"}, "y", 4, 2) + "\n";
        const auto report = index.ingest(text, embedder);
        CHECK(report.accepted == 0);
        CHECK(report.errors.size() == 2);
    }
    SUBCASE("provided embeddings must be 384-dimensional") {
        CorpusIndex index;
        Json doc = Json::parse(corpus_line("a1", "Alpha", {"deck_building"}, "x", 2, 4));
        doc["embedding"] = std::vector<double>(10, 0.5);
        const auto report =
            index.ingest(std::string(kCorpusHeader) + "\n" + doc.dump() + "\n", embedder);
        CHECK(report.accepted == 0);
        REQUIRE(report.errors.size() == 1);
        CHECK(report.errors[0].message.find("384") != std::string::npos);
    }
}

TEST_CASE("snapshot round-trips records and embeddings exactly") {
    HashingEmbedder embedder;
    CorpusIndex index;
    std::string text = std::string(kCorpusHeader) + "\n" +
                       corpus_line("a1", "Alpha", {"deck_building", "set_collection"},
                                   "draft cards and collect sets", 2, 4, 2.1) +
                       "\n" +
                       corpus_line("b2", "Beta", {"area_control"}, "march on the capital", 3,
                                   5) +
                       "\n";
    REQUIRE(index.ingest(text, embedder).ok());

    CorpusIndex reloaded;
    REQUIRE(reloaded.ingest(index.save_snapshot(), embedder).ok());
    REQUIRE(reloaded.size() == index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        CHECK(reloaded.records()[i].id == index.records()[i].id);
        CHECK(reloaded.records()[i].mechanisms == index.records()[i].mechanisms);
        CHECK((reloaded.records()[i].embedding - index.records()[i].embedding).norm() ==
              doctest::Approx(0.0));
    }
}

TEST_CASE("two-phase retrieval basics") {
    HashingEmbedder embedder;
    CorpusIndex index;
    std::string text =
        std::string(kCorpusHeader) + "\n" +
        corpus_line("dbg", "Deckbuilder", {"deck_building"}, "fungi cave spores", 2, 4, 2.0) +
        "\n" +
        corpus_line("ac1", "Warlord", {"area_control"}, "fungi cave spores", 2, 4, 3.0) +
        "\n" +
        corpus_line("ac2", "Marcher", {"area_control"}, "castle siege armies", 2, 6, 3.2) +
        "\n" +
        corpus_line("wp1", "Foreman", {"worker_placement"}, "harbor trade goods", 1, 5, 2.8) +
        "\n";
    REQUIRE(index.ingest(text, embedder).ok());

    SUBCASE("phase 1 keeps only mechanism matches when enough survive") {
        RetrievalQuery q;
        q.theme_text = "fungi cave spores";
        q.target_mechanisms = {MechanismKind::area_control};
        q.top_k = 2;
        const auto got = index.retrieve(q, embedder);
        REQUIRE(got.size() == 2);
        CHECK(got[0].record.id == "ac1");  // same mechanisms, closer theme
        CHECK(got[1].record.id == "ac2");
        CHECK(got[0].shared_mechanisms == std::vector<MechanismKind>{
                                              MechanismKind::area_control});
        CHECK(got[0].similarity >= got[1].similarity);
    }
    SUBCASE("fallback widens and marks widened entries") {
        RetrievalQuery q;
        q.theme_text = "fungi cave spores";
        q.target_mechanisms = {MechanismKind::worker_placement};
        q.top_k = 3;
        const auto got = index.retrieve(q, embedder);
        REQUIRE(got.size() == 3);
        int matched = 0;
        for (const auto& g : got) matched += g.shared_mechanisms.empty() ? 0 : 1;
        CHECK(matched == 1);  // only wp1 actually shares a mechanism
    }
    SUBCASE("empty targets mean pure semantic ranking") {
        RetrievalQuery q;
        q.theme_text = "fungi cave spores";
        q.top_k = 2;
        const auto got = index.retrieve(q, embedder);
        REQUIRE(got.size() == 2);
        for (const auto& g : got) CHECK(g.shared_mechanisms.empty());
        CHECK(got[0].similarity >= got[1].similarity);
    }
    SUBCASE("player and weight filters prune phase 1") {
        RetrievalQuery q;
        q.theme_text = "fungi cave spores";
        q.target_mechanisms = {MechanismKind::area_control};
        q.top_k = 1;
        q.weight_range = {3.1, 4.0};
        const auto got = index.retrieve(q, embedder);
        REQUIRE(got.size() == 1);
        CHECK(got[0].record.id == "ac2");
        CHECK_FALSE(got[0].shared_mechanisms.empty());
    }
    SUBCASE("empty corpus retrieves nothing") {
        CorpusIndex blank;
        RetrievalQuery q;
        q.theme_text = "anything";
        CHECK(blank.retrieve(q, embedder).empty());
    }
}

TEST_CASE("retrieval matches the exhaustive oracle on 50 random corpora") {
    std::mt19937_64 rng(1234);
    HashingEmbedder embedder;
    for (int trial = 0; trial < 50; ++trial) {
        const auto corpus = random_corpus(rng, 200);
        CorpusIndex index;
        REQUIRE(index.ingest(corpus.jsonl, embedder).ok());
        for (int qi = 0; qi < 4; ++qi) {
            const auto query = random_query(rng);
            const auto expected = oracle_retrieve(index.records(), query, embedder);
            const auto got = index.retrieve(query, embedder);
            REQUIRE(got.size() == expected.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].record.id == expected[i]);
            }
        }
    }
}

TEST_CASE("filter soundness and rank monotonicity over 1000 random cases") {
    std::mt19937_64 rng(5678);
    HashingEmbedder embedder;
    for (int trial = 0; trial < 100; ++trial) {
        const auto corpus = random_corpus(rng, 60);
        CorpusIndex index;
        REQUIRE(index.ingest(corpus.jsonl, embedder).ok());
        for (int qi = 0; qi < 10; ++qi) {
            const auto query = random_query(rng);
            const auto got = index.retrieve(query, embedder);

            CHECK(got.size() <= static_cast<std::size_t>(query.top_k));
            for (std::size_t i = 0; i + 1 < got.size(); ++i) {
                CHECK(got[i].similarity >= got[i + 1].similarity);
            }
            for (const auto& g : got) {
                if (g.shared_mechanisms.empty()) continue;
                // Claimed matches really share a target mechanism…
                for (const auto m : g.shared_mechanisms) {
                    CHECK(std::find(query.target_mechanisms.begin(),
                                    query.target_mechanisms.end(),
                                    m) != query.target_mechanisms.end());
                    CHECK(std::find(g.record.mechanisms.begin(), g.record.mechanisms.end(),
                                    m) != g.record.mechanisms.end());
                }
                // …and really pass the declared filters.
                if (query.player_range) {
                    CHECK(g.record.max_players >= query.player_range->first);
                    CHECK(g.record.min_players <= query.player_range->second);
                }
                if (query.weight_range) {
                    REQUIRE(g.record.weight.has_value());
                    CHECK(*g.record.weight >= query.weight_range->first);
                    CHECK(*g.record.weight <= query.weight_range->second);
                }
            }
        }
    }
}

TEST_CASE("format_precedents renders a prompt fragment") {
    HashingEmbedder embedder;
    CorpusIndex index;
    std::string long_desc(300, 'x');
    long_desc[150] = ' ';
    std::string text = std::string(kCorpusHeader) + "\n" +
                       corpus_line("a1", "Alpha", {"deck_building"}, long_desc, 2, 4) + "\n";
    REQUIRE(index.ingest(text, embedder).ok());

    RetrievalQuery q;
    q.theme_text = "anything";
    q.target_mechanisms = {MechanismKind::deck_building};
    q.top_k = 1;
    const auto got = index.retrieve(q, embedder);
    const std::string rendered = format_precedents(got);
    CHECK(rendered.find("Design precedents from published games:") != std::string::npos);
    CHECK(rendered.find("1. Alpha (players 2-4)") != std::string::npos);
    CHECK(rendered.find("deck_building") != std::string::npos);
    CHECK(rendered.size() < 500);  // excerpt capped

    CHECK(format_precedents({}).empty());
}

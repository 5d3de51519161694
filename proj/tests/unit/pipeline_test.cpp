#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leadnet/pipeline.hpp"
#include "support/tree.hpp"

namespace leadnet {
namespace {

namespace fs = std::filesystem;
using leadnet::test::ScratchDir;
using leadnet::test::read_tree;

class PipelineTest : public ::testing::Test {
protected:
    void SetUp() override {
        PipelineConfig cfg;
        cfg.out = scratch_.path() / "data";
        cfg.synth.n_threads = 150;
        cfg.synth.span_days = 90;
        cfg.seed = 17;
        run(Subcommand::synth, cfg);
    }

    PipelineConfig config(const std::string& out) const {
        PipelineConfig cfg;
        const fs::path data = scratch_.path() / "data";
        cfg.input = (data / "threads.jsonl").string();
        cfg.ratings = (data / "ratings.jsonl").string();
        cfg.lexicon = (data / "lexicon.tsv").string();
        cfg.stopwords = (data / "stopwords.txt").string();
        cfg.out = scratch_.path() / out;
        return cfg;
    }

    ScratchDir scratch_;
};

TEST_F(PipelineTest, SynthWritesFixtureFiles) {
    const auto tree = read_tree(scratch_.path() / "data");
    for (const char* name : {"threads.jsonl", "ratings.jsonl", "lexicon.tsv", "stopwords.txt", "manifest.json"}) {
        EXPECT_TRUE(tree.contains(name)) << name;
    }
    const auto m = nlohmann::json::parse(tree.at("manifest.json"));
    EXPECT_EQ(m["command"], "synth");
    EXPECT_EQ(m["config"]["seed"], 17);
    EXPECT_EQ(m["config"]["synth"]["n_threads"], 150);
}

TEST_F(PipelineTest, AllWritesEveryArtifact) {
    const RunReport report = run(Subcommand::all, config("out"));
    const auto tree = read_tree(scratch_.path() / "out");
    for (const char* name : {"threads.normalized.jsonl", "ratings.normalized.jsonl", "rankings/window_0000.csv",
                             "rankings/corpus.csv", "topics.json", "analytics.csv", "graphs/window_0000.edges.csv",
                             "graphs/window_0000.dot", "graphs/corpus.dot", "diagnostics.txt", "manifest.json"}) {
        EXPECT_TRUE(tree.contains(name)) << name;
    }
    EXPECT_EQ(report.outputs.size(), tree.size());
    // 90 days from January: three calendar months
    EXPECT_TRUE(tree.contains("rankings/window_0002.csv"));
    EXPECT_FALSE(tree.contains("rankings/window_0003.csv"));

    const auto m = nlohmann::json::parse(tree.at("manifest.json"));
    EXPECT_EQ(m["tool"], "leadnet");
    EXPECT_EQ(m["version"], std::string(tool_version));
    EXPECT_EQ(m["config"]["window"], "month");
    EXPECT_EQ(m["config"]["top_k"], "decile");
    EXPECT_FALSE(m["config"].contains("synth"));
    ASSERT_EQ(m["inputs"].size(), 4u);
    EXPECT_EQ(m["inputs"][0]["sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(m["outputs"].size(), tree.size() - 1);
}

TEST_F(PipelineTest, ManifestReflectsEffectiveConfig) {
    PipelineConfig cfg = config("out");
    cfg.window = WindowConfig::of_days(14);
    cfg.mpr.alpha = {0.8, 0.7, 0.6};
    cfg.mpr.layer_order = {LayerKind::credibility, LayerKind::empowerment, LayerKind::collaboration};
    cfg.top_k = 5;
    run(Subcommand::rank, cfg);
    std::ifstream in(scratch_.path() / "out" / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    EXPECT_EQ(m["command"], "rank");
    EXPECT_EQ(m["config"]["window"], "days:14");
    EXPECT_EQ(m["config"]["alpha"], (std::vector<double>{0.8, 0.7, 0.6}));
    EXPECT_EQ(m["config"]["layer_order"][0], "credibility");
    EXPECT_EQ(m["config"]["top_k"], 5);
    EXPECT_EQ(m["inputs"].size(), 2u);
}

TEST_F(PipelineTest, RankingsHaveOneRowPerUser) {
    run(Subcommand::rank, config("out"));
    std::ifstream in(scratch_.path() / "out" / "rankings" / "corpus.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "user_id,gender,role,r_empowerment,r_collaboration,r_credibility,leadership,brokerage");
    std::size_t rows = 0;
    double mass = 0.0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string cell;
        for (int i = 0; i < 7; ++i) {
            std::getline(ss, cell, ',');
        }
        mass += std::stod(cell);
    }
    EXPECT_GT(rows, 50u);
    EXPECT_NEAR(mass, 1.0, 1e-9);
}

TEST_F(PipelineTest, ByteIdenticalAcrossRunsAndJobs) {
    PipelineConfig a = config("a");
    PipelineConfig b = config("b");
    b.jobs = 8;
    PipelineConfig c = config("c");
    c.jobs = 3;
    run(Subcommand::all, a);
    run(Subcommand::all, b);
    run(Subcommand::all, c);
    const auto ta = read_tree(a.out);
    EXPECT_EQ(ta, read_tree(b.out));
    EXPECT_EQ(ta, read_tree(c.out));
}

TEST_F(PipelineTest, FailureRemovesPartialOutputs) {
    PipelineConfig cfg = config("out");
    fs::create_directories(cfg.out);
    std::ofstream(cfg.out / "graphs") << "in the way\n";
    EXPECT_THROW(run(Subcommand::all, cfg), Error);
    const auto tree = read_tree(cfg.out);
    ASSERT_EQ(tree.size(), 1u);
    EXPECT_EQ(tree.begin()->first, "graphs");
    EXPECT_FALSE(fs::exists(cfg.out / "rankings"));
}

TEST_F(PipelineTest, UnknownTopicFailsCleanly) {
    PipelineConfig cfg = config("out");
    cfg.topic_id = "w9999-t9999";
    EXPECT_THROW(run(Subcommand::export_graph, cfg), ContractViolation);
    EXPECT_TRUE(read_tree(cfg.out).empty());
}

TEST_F(PipelineTest, TopicAndRoleExports) {
    PipelineConfig cfg = config("out");
    cfg.roles = {Role::manager};
    run(Subcommand::topics, cfg);
    std::ifstream in(cfg.out / "topics.json");
    const auto topics = nlohmann::json::parse(in);
    ASSERT_FALSE(topics.empty());
    cfg.topic_id = topics[0]["topic_id"].get<std::string>();
    run(Subcommand::export_graph, cfg);
    const auto tree = read_tree(cfg.out);
    EXPECT_TRUE(tree.contains("graphs/topic_" + *cfg.topic_id + ".edges.csv"));
    EXPECT_TRUE(tree.contains("graphs/corpus.roles.dot"));
}

TEST_F(PipelineTest, ContractErrors) {
    PipelineConfig cfg = config("out");
    cfg.input = (scratch_.path() / "missing.jsonl").string();
    EXPECT_THROW(run(Subcommand::rank, cfg), IoError);
    cfg = config("out");
    cfg.lexicon.clear();
    EXPECT_THROW(run(Subcommand::topics, cfg), ContractViolation);
    cfg = config("out");
    cfg.out.clear();
    EXPECT_THROW(run(Subcommand::rank, cfg), ContractViolation);
    cfg = config("out");
    cfg.mpr.alpha[1] = 1.0;
    EXPECT_THROW(run(Subcommand::rank, cfg), ContractViolation);
}

TEST(Subcommand, NamesRoundTrip) {
    for (Subcommand s : {Subcommand::ingest, Subcommand::rank, Subcommand::topics, Subcommand::analytics,
                         Subcommand::export_graph, Subcommand::synth, Subcommand::all}) {
        EXPECT_EQ(parse_subcommand(to_string(s)), s);
    }
    EXPECT_THROW(parse_subcommand("dance"), ContractViolation);
}

}  // namespace
}  // namespace leadnet

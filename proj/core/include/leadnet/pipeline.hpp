#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "leadnet/ingest.hpp"
#include "leadnet/rank.hpp"
#include "leadnet/synth.hpp"
#include "leadnet/topics.hpp"

namespace leadnet {

inline constexpr std::string_view tool_version = "0.3.0";

enum class Subcommand { ingest, rank, topics, analytics, export_graph, synth, all };

std::string_view to_string(Subcommand cmd);
Subcommand parse_subcommand(std::string_view text);

struct PipelineConfig {
    std::string input;
    std::string ratings;
    std::string lexicon;
    std::string stopwords;
    std::filesystem::path out;
    std::optional<LogFormat> format;

    WindowConfig window = WindowConfig::month();
    MprParams mpr;
    TopicConfig topics;

    /// Top-set size for rank mass; the top decile of active users when unset.
    std::optional<std::size_t> top_k;
    /// Role filter for exported subgraphs; empty exports no role subgraph.
    std::set<Role> roles;
    /// Restrict exported graphs to the threads of one topic.
    std::optional<std::string> topic_id;

    std::uint64_t seed = 1;
    SyntheticSpec synth;

    /// Worker threads for per-window work. Never changes any output.
    std::size_t jobs = 1;
};

struct RunReport {
    std::vector<std::filesystem::path> outputs;  // relative to cfg.out
    std::vector<Diagnostic> diagnostics;
};

/// Runs one subcommand and writes its artifacts plus `manifest.json` under
/// cfg.out. On failure every file written by this run is removed and the
/// exception propagates.
RunReport run(Subcommand cmd, const PipelineConfig& cfg);

}  // namespace leadnet

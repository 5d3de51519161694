#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leadnet/analytics.hpp"
#include "leadnet/ingest.hpp"
#include "leadnet/multiplex.hpp"
#include "leadnet/rank.hpp"
#include "leadnet/topics.hpp"

namespace leadnet {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// `src,dst,weight,layer` rows for all three layers, with user ids.
void write_edge_list(std::ostream& out, const MultiplexTensor& tensor, const std::vector<UserRef>& users);

/// Undirected DOT graph; every node carries `gender` and `role` attributes.
void write_dot(std::ostream& out, const std::vector<UserRef>& users, std::span<const std::size_t> nodes,
               std::span<const std::pair<std::size_t, std::size_t>> edges, const std::string& graph_name);

/// One row per user, sorted by leadership descending (ties by user_id):
/// `user_id,gender,role,r_empowerment,r_collaboration,r_credibility,leadership,brokerage`.
void write_rankings(std::ostream& out, const std::vector<UserRef>& users, const MultiplexRanks& ranks,
                    const RankVector& brokerage);

/// JSON array of `{window, topic_id, stream_id, members: [{ngram, freq}]}`
/// ordered by window then topic_id.
void write_topics_json(std::ostream& out, std::span<const TopicStream> streams);

/// Long-format analytics table: `window_start,metric,group,value,count`.
struct MetricRow {
    Timestamp window_start = 0;
    std::string metric;
    std::string group;
    std::optional<double> value;
    std::size_t count = 0;
};

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows);

}  // namespace leadnet

#include "leadnet/export.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "leadnet/time.hpp"

namespace leadnet {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_edge_list(std::ostream& out, const MultiplexTensor& tensor, const std::vector<UserRef>& users) {
    out << "src,dst,weight,layer\n";
    for (LayerKind kind : {LayerKind::empowerment, LayerKind::collaboration, LayerKind::credibility}) {
        for (const Edge& e : tensor.layer(kind).edges()) {
            out << csv_field(users[e.src].user_id) << ',' << csv_field(users[e.dst].user_id) << ','
                << format_double(e.weight) << ',' << to_string(kind) << '\n';
        }
    }
}

void write_dot(std::ostream& out, const std::vector<UserRef>& users, std::span<const std::size_t> nodes,
               std::span<const std::pair<std::size_t, std::size_t>> edges, const std::string& graph_name) {
    out << "graph " << dot_id(graph_name) << " {\n";
    for (std::size_t v : nodes) {
        const UserRef& u = users[v];
        out << "  " << dot_id(u.user_id) << " [gender=" << dot_id(std::string(to_string(u.gender)))
            << ", role=" << dot_id(std::string(to_string(u.role))) << "];\n";
    }
    for (auto [a, b] : edges) {
        out << "  " << dot_id(users[a].user_id) << " -- " << dot_id(users[b].user_id) << ";\n";
    }
    out << "}\n";
}

void write_rankings(std::ostream& out, const std::vector<UserRef>& users, const MultiplexRanks& ranks,
                    const RankVector& brokerage) {
    out << "user_id,gender,role,r_empowerment,r_collaboration,r_credibility,leadership,brokerage\n";
    std::vector<std::size_t> order(users.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks.leadership[a] > ranks.leadership[b]; });
    for (std::size_t i : order) {
        out << csv_field(users[i].user_id) << ',' << to_string(users[i].gender) << ',' << to_string(users[i].role)
            << ',' << format_double(ranks.empowerment[i]) << ',' << format_double(ranks.collaboration[i]) << ','
            << format_double(ranks.credibility[i]) << ',' << format_double(ranks.leadership[i]) << ','
            << format_double(brokerage[i]) << '\n';
    }
}

void write_topics_json(std::ostream& out, std::span<const TopicStream> streams) {
    struct Row {
        const Topic* topic;
        const std::string* stream_id;
    };
    std::vector<Row> rows;
    for (const auto& s : streams) {
        for (const auto& t : s.members) {
            rows.push_back({&t, &s.stream_id});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.topic->window, a.topic->topic_id) < std::tie(b.topic->window, b.topic->topic_id);
    });
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Row& r : rows) {
        nlohmann::ordered_json j;
        j["window"] = r.topic->window;
        j["topic_id"] = r.topic->topic_id;
        j["stream_id"] = *r.stream_id;
        j["members"] = nlohmann::ordered_json::array();
        for (const auto& [ngram, freq] : r.topic->concepts) {
            nlohmann::ordered_json m;
            m["ngram"] = ngram;
            m["freq"] = freq;
            j["members"].push_back(std::move(m));
        }
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows) {
    out << "window_start,metric,group,value,count\n";
    for (const MetricRow& r : rows) {
        out << format_timestamp(r.window_start) << ',' << csv_field(r.metric) << ',' << csv_field(r.group) << ','
            << (r.value ? format_double(*r.value) : std::string()) << ',' << r.count << '\n';
    }
}

}  // namespace leadnet

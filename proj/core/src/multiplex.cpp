#include "leadnet/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace leadnet {

namespace {

using RawWeights = std::map<std::pair<std::size_t, std::size_t>, double>;

bool is_mention_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
}

/// Divides each weight by the sum over its normalization group.
Layer normalized_layer(std::size_t n, Orientation orientation, const RawWeights& raw) {
    std::vector<double> sums(n, 0.0);
    for (const auto& [key, w] : raw) {
        sums[orientation == Orientation::receiver_normalized ? key.second : key.first] += w;
    }
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& [key, w] : raw) {
        const double s = sums[orientation == Orientation::receiver_normalized ? key.second : key.first];
        edges.push_back(Edge{key.first, key.second, w / s});
    }
    return Layer(n, orientation, std::move(edges));
}

}  // namespace

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::empowerment: return "empowerment";
        case LayerKind::collaboration: return "collaboration";
        case LayerKind::credibility: break;
    }
    return "credibility";
}

LayerKind parse_layer_kind(std::string_view text) {
    if (text == "empowerment") return LayerKind::empowerment;
    if (text == "collaboration") return LayerKind::collaboration;
    if (text == "credibility") return LayerKind::credibility;
    throw ContractViolation("unknown layer '" + std::string(text) + "'");
}

Layer::Layer(std::size_t n, Orientation orientation, std::vector<Edge> edges)
    : n_(n), orientation_(orientation), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.src >= n_ || e.dst >= n_) {
            throw ContractViolation("edge endpoint outside the user index");
        }
        if (e.src == e.dst) {
            throw ContractViolation("self-loops are not allowed in a layer");
        }
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw ContractViolation("edge weights must be finite and non-negative");
        }
        if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst) {
            throw ContractViolation("duplicate edge in layer");
        }
    }
}

double Layer::weight(std::size_t src, std::size_t dst) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(src, dst), [](const Edge& e, const auto& key) {
        return std::tie(e.src, e.dst) < std::tie(key.first, key.second);
    });
    return it != edges_.end() && it->src == src && it->dst == dst ? it->weight : 0.0;
}

std::vector<double> Layer::out_sums() const {
    std::vector<double> sums(n_, 0.0);
    for (const Edge& e : edges_) {
        sums[e.src] += e.weight;
    }
    return sums;
}

std::vector<double> Layer::in_sums() const {
    std::vector<double> sums(n_, 0.0);
    for (const Edge& e : edges_) {
        sums[e.dst] += e.weight;
    }
    return sums;
}

std::vector<double> Layer::dense() const {
    std::vector<double> m(n_ * n_, 0.0);
    for (const Edge& e : edges_) {
        m[e.src * n_ + e.dst] = e.weight;
    }
    return m;
}

double Layer::stochastic_error() const {
    const bool by_receiver = orientation_ == Orientation::receiver_normalized;
    const std::vector<double> sums = by_receiver ? in_sums() : out_sums();
    std::vector<bool> constrained(n_, false);
    for (const Edge& e : edges_) {
        constrained[by_receiver ? e.dst : e.src] = true;
    }
    double worst = 0.0;
    for (std::size_t v = 0; v < n_; ++v) {
        if (constrained[v]) {
            worst = std::max(worst, std::abs(sums[v] - 1.0));
        }
    }
    return worst;
}

const Layer& MultiplexTensor::layer(LayerKind kind) const {
    switch (kind) {
        case LayerKind::empowerment: return empowerment;
        case LayerKind::collaboration: return collaboration;
        case LayerKind::credibility: break;
    }
    return credibility;
}

double comment_weight(int k) {
    if (k < 1) {
        throw ContractViolation("comment order k must be >= 1");
    }
    return 0.5 + 0.5 / static_cast<double>(k);
}

UserRef resolve_recipient(const CommentRecord& comment, const ThreadRecord& thread,
                          const std::set<std::string>& prior_participants) {
    const std::string& text = comment.text;
    for (std::size_t pos = text.find('@'); pos != std::string::npos; pos = text.find('@', pos + 1)) {
        std::size_t end = pos + 1;
        while (end < text.size() && is_mention_char(text[end])) {
            ++end;
        }
        std::string_view token(text.data() + pos + 1, end - pos - 1);
        while (!token.empty() && token.back() == '.') {
            token.remove_suffix(1);
        }
        if (token.empty() || token == comment.author.user_id) {
            continue;
        }
        const std::string id(token);
        if (!prior_participants.contains(id)) {
            continue;
        }
        if (id == thread.author.user_id) {
            return thread.author;
        }
        for (const auto& c : thread.comments) {
            if (c.author.user_id == id) {
                return c.author;
            }
        }
    }
    return thread.author;
}

std::vector<UserRef> resolve_recipients(const ThreadRecord& thread) {
    std::vector<UserRef> out;
    out.reserve(thread.comments.size());
    std::set<std::string> participants{thread.author.user_id};
    for (const auto& c : thread.comments) {
        out.push_back(resolve_recipient(c, thread, participants));
        participants.insert(c.author.user_id);
    }
    return out;
}

Layer build_empowerment(const WindowSlice& slice) {
    const Corpus& corpus = *slice.corpus;
    RawWeights raw;
    for (std::size_t ti : slice.threads) {
        const ThreadRecord& t = corpus.threads[ti];
        const std::size_t author = corpus.index_of(t.author.user_id);
        std::set<std::size_t> commenters;
        for (const auto& c : t.comments) {
            commenters.insert(corpus.index_of(c.author.user_id));
        }
        commenters.erase(author);
        for (std::size_t j : commenters) {
            raw[{author, j}] += 1.0;
        }
    }
    return normalized_layer(corpus.n_users(), Orientation::receiver_normalized, raw);
}

Layer build_collaboration(const WindowSlice& slice) {
    const Corpus& corpus = *slice.corpus;
    RawWeights raw;
    for (std::size_t ti : slice.threads) {
        const ThreadRecord& t = corpus.threads[ti];
        const std::vector<UserRef> recipients = resolve_recipients(t);
        for (std::size_t ci = 0; ci < t.comments.size(); ++ci) {
            const std::size_t i = corpus.index_of(t.comments[ci].author.user_id);
            const std::size_t j = corpus.index_of(recipients[ci].user_id);
            if (i != j) {
                raw[{i, j}] += comment_weight(t.comments[ci].order_k);
            }
        }
    }
    return normalized_layer(corpus.n_users(), Orientation::receiver_normalized, raw);
}

std::optional<double> trust_score(std::size_t rater, std::size_t target, const WindowSlice& slice) {
    const Corpus& corpus = *slice.corpus;
    double delta_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t ri : slice.ratings) {
        const RatingEvent& r = corpus.ratings[ri];
        const MessageRef* msg = corpus.message(r.target_message_id);
        if (msg == nullptr || msg->author != target || corpus.index_of(r.rater.user_id) != rater) {
            continue;
        }
        delta_sum += r.value;
        ++count;
    }
    if (count == 0) {
        return std::nullopt;
    }
    return 0.5 + 0.5 * delta_sum / static_cast<double>(count);
}

Layer build_credibility(const WindowSlice& slice) {
    const Corpus& corpus = *slice.corpus;
    // (rater, target) -> (sum of deltas, number of rated messages)
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> acc;
    for (std::size_t ri : slice.ratings) {
        const RatingEvent& r = corpus.ratings[ri];
        const MessageRef* msg = corpus.message(r.target_message_id);
        if (msg == nullptr) {
            continue;
        }
        const std::size_t i = corpus.index_of(r.rater.user_id);
        const std::size_t j = msg->author;
        if (i == j) {
            continue;
        }
        auto& [sum, count] = acc[{i, j}];
        sum += r.value;
        ++count;
    }
    RawWeights trust;
    for (const auto& [key, sc] : acc) {
        trust[key] = 0.5 + 0.5 * sc.first / static_cast<double>(sc.second);
    }
    // Raters whose every trust is zero spread their weight uniformly.
    std::vector<double> row_sum(corpus.n_users(), 0.0);
    for (const auto& [key, w] : trust) {
        row_sum[key.first] += w;
    }
    for (auto& [key, w] : trust) {
        if (row_sum[key.first] == 0.0) {
            w = 1.0;
        }
    }
    return normalized_layer(corpus.n_users(), Orientation::sender_normalized, trust);
}

MultiplexTensor build_tensor(const WindowSlice& slice) {
    return MultiplexTensor{build_empowerment(slice), build_collaboration(slice), build_credibility(slice)};
}

bool UndirectedGraph::has_edge(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency[a];
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t UndirectedGraph::edge_count() const {
    std::size_t deg = 0;
    for (const auto& adj : adjacency) {
        deg += adj.size();
    }
    return deg / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> UndirectedGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < adjacency.size(); ++a) {
        for (std::size_t b : adjacency[a]) {
            if (a < b) {
                out.emplace_back(a, b);
            }
        }
    }
    return out;
}

UndirectedGraph UndirectedGraph::from_edges(std::size_t n,
                                            std::span<const std::pair<std::size_t, std::size_t>> edges) {
    UndirectedGraph g;
    g.adjacency.resize(n);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) {
            throw ContractViolation("edge endpoint outside the graph");
        }
        if (a == b) {
            continue;
        }
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
    }
    for (auto& adj : g.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return g;
}

UndirectedGraph layer_union(const MultiplexTensor& tensor) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const Layer* layer : {&tensor.empowerment, &tensor.collaboration, &tensor.credibility}) {
        for (const Edge& e : layer->edges()) {
            pairs.emplace_back(e.src, e.dst);
        }
    }
    return UndirectedGraph::from_edges(tensor.n(), pairs);
}

}  // namespace leadnet

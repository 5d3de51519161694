#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leadnet/ingest.hpp"

namespace leadnet {

enum class LayerKind { empowerment = 0, collaboration = 1, credibility = 2 };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view text);

/// Which side of an edge carries the unit-sum constraint.
///   receiver_normalized: for each j with incoming edges, sum_i w(i->j) = 1
///                        (left stochastic, columns sum to one).
///   sender_normalized:   for each i with outgoing edges, sum_j w(i->j) = 1
///                        (right stochastic, rows sum to one).
enum class Orientation { receiver_normalized, sender_normalized };

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sparse weighted directed layer over a fixed user index.
/// Edges are sorted by (src, dst), unique, non-negative and loop-free.
class Layer {
public:
    Layer() = default;
    Layer(std::size_t n, Orientation orientation, std::vector<Edge> edges);

    std::size_t n() const { return n_; }
    Orientation orientation() const { return orientation_; }
    std::span<const Edge> edges() const { return edges_; }
    bool empty() const { return edges_.empty(); }
    double weight(std::size_t src, std::size_t dst) const;

    std::vector<double> out_sums() const;
    std::vector<double> in_sums() const;
    /// Row-major n*n copy; intended for small layers and tests.
    std::vector<double> dense() const;

    /// Largest |sum - 1| over the constrained side (rows or columns with
    /// at least one edge). Zero for an empty layer.
    double stochastic_error() const;

    friend bool operator==(const Layer&, const Layer&) = default;

private:
    std::size_t n_ = 0;
    Orientation orientation_ = Orientation::receiver_normalized;
    std::vector<Edge> edges_;
};

struct MultiplexTensor {
    Layer empowerment;
    Layer collaboration;
    Layer credibility;

    std::size_t n() const { return empowerment.n(); }
    const Layer& layer(LayerKind kind) const;
};

/// 0.5 + 0.5 / k. Throws ContractViolation for k < 1.
double comment_weight(int k);

/// Recipient of a comment: the first `@user_id` mention naming a prior
/// participant (the thread author or an earlier commenter) other than the
/// commenter, otherwise the thread author.
UserRef resolve_recipient(const CommentRecord& comment, const ThreadRecord& thread,
                          const std::set<std::string>& prior_participants);

/// Recipients for every comment of a thread, in comment order.
std::vector<UserRef> resolve_recipients(const ThreadRecord& thread);

Layer build_empowerment(const WindowSlice& slice);
Layer build_collaboration(const WindowSlice& slice);
Layer build_credibility(const WindowSlice& slice);
MultiplexTensor build_tensor(const WindowSlice& slice);

/// 0.5 + 0.5 * mean(delta) over the messages of `target` that `rater`
/// rated within the slice; nullopt when there are none.
std::optional<double> trust_score(std::size_t rater, std::size_t target, const WindowSlice& slice);

/// Simple undirected graph with sorted adjacency lists.
struct UndirectedGraph {
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t n() const { return adjacency.size(); }
    bool has_edge(std::size_t a, std::size_t b) const;
    std::size_t edge_count() const;
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;

    static UndirectedGraph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;
};

/// Undirected union of the supports of all three layers.
UndirectedGraph layer_union(const MultiplexTensor& tensor);

}  // namespace leadnet

#include "leadnet/rank.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace leadnet {

namespace {

struct GatherEntry {
    std::size_t from;
    double weight;
};

/// Row i lists the (j, w) terms of sum_j G[i][j] r_j.
using GatherRows = std::vector<std::vector<GatherEntry>>;

GatherRows gather_rows(const Layer& layer, Direction direction) {
    GatherRows rows(layer.n());
    for (const Edge& e : layer.edges()) {
        if (direction == Direction::as_is) {
            rows[e.dst].push_back({e.src, e.weight});
        } else {
            rows[e.src].push_back({e.dst, e.weight});
        }
    }
    return rows;
}

/// Shared power iteration. `bias` multiplies the walk term per node and
/// `teleport` is the (already scaled) jump term; both have length N.
std::vector<double> power_iterate(const GatherRows& rows, double alpha, const std::vector<double>& bias,
                                  const std::vector<double>& teleport, double tol, int max_iter,
                                  std::string_view layer_name) {
    const std::size_t n = rows.size();
    std::vector<double> r(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    double residual = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double walk = 0.0;
            for (const GatherEntry& g : rows[i]) {
                walk += g.weight * r[g.from];
            }
            next[i] = alpha * bias[i] * walk + teleport[i];
            total += next[i];
        }
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= total;
            residual += std::abs(next[i] - r[i]);
        }
        r.swap(next);
        if (residual < tol) {
            return r;
        }
    }
    throw ConvergenceError(std::string(layer_name), std::move(r), residual);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ContractViolation("damping factor alpha must lie in (0, 1)");
    }
}

RankLabel label_of(LayerKind kind) {
    switch (kind) {
        case LayerKind::empowerment: return RankLabel::empowerment;
        case LayerKind::collaboration: return RankLabel::collaboration;
        case LayerKind::credibility: break;
    }
    return RankLabel::credibility;
}

}  // namespace

std::string_view to_string(RankLabel label) {
    switch (label) {
        case RankLabel::empowerment: return "empowerment";
        case RankLabel::collaboration: return "collaboration";
        case RankLabel::credibility: return "credibility";
        case RankLabel::leadership: return "leadership";
        case RankLabel::brokerage: return "brokerage";
        case RankLabel::pagerank: break;
    }
    return "pagerank";
}

Direction default_direction(LayerKind kind) {
    return kind == LayerKind::credibility ? Direction::as_is : Direction::transposed;
}

ConvergenceError::ConvergenceError(std::string layer, std::vector<double> last_iterate, double residual)
    : Error("power iteration on layer '" + layer + "' did not converge (residual " + std::to_string(residual) + ")"),
      layer_(std::move(layer)),
      last_iterate_(std::move(last_iterate)),
      residual_(residual) {}

RankVector pagerank(const Layer& layer, Direction direction, double alpha, double tol, int max_iter) {
    if (layer.n() == 0) {
        throw ContractViolation("pagerank needs at least one node");
    }
    check_alpha(alpha);
    if (!(tol > 0.0) || max_iter < 1) {
        throw ContractViolation("pagerank needs tol > 0 and max_iter >= 1");
    }
    const std::size_t n = layer.n();
    const std::vector<double> bias(n, 1.0);
    const std::vector<double> teleport(n, (1.0 - alpha) / static_cast<double>(n));
    return RankVector{power_iterate(gather_rows(layer, direction), alpha, bias, teleport, tol, max_iter, "pagerank"),
                      RankLabel::pagerank};
}

void MprParams::validate() const {
    for (double a : alpha) {
        check_alpha(a);
    }
    if (!std::isfinite(beta) || beta > 1.0) {
        throw ContractViolation("beta must be finite and <= 1");
    }
    if (!std::isfinite(gamma) || gamma > 1.0) {
        throw ContractViolation("gamma must be finite and <= 1");
    }
    if (!(tol > 0.0)) {
        throw ContractViolation("tol must be positive");
    }
    if (max_iter < 1) {
        throw ContractViolation("max_iter must be positive");
    }
    if (!(epsilon_floor > 0.0)) {
        throw ContractViolation("epsilon_floor must be positive");
    }
    std::array<bool, 3> seen{};
    for (LayerKind k : layer_order) {
        seen[static_cast<std::size_t>(k)] = true;
    }
    if (!seen[0] || !seen[1] || !seen[2]) {
        throw ContractViolation("layer_order must be a permutation of the three layers");
    }
}

const RankVector& MultiplexRanks::layer(LayerKind kind) const {
    switch (kind) {
        case LayerKind::empowerment: return empowerment;
        case LayerKind::collaboration: return collaboration;
        case LayerKind::credibility: break;
    }
    return credibility;
}

MultiplexRanks multiplex_pagerank(const MultiplexTensor& tensor, const MprParams& params) {
    params.validate();
    const std::size_t n = tensor.n();
    if (n == 0) {
        throw ContractViolation("multiplex_pagerank needs at least one node");
    }
    if (tensor.collaboration.n() != n || tensor.credibility.n() != n) {
        throw ContractViolation("tensor layers must share one user index");
    }

    MultiplexRanks out;
    std::optional<std::vector<double>> previous;
    for (std::size_t pos = 0; pos < 3; ++pos) {
        const LayerKind kind = params.layer_order[pos];
        const double alpha = params.alpha[pos];
        std::vector<double> bias(n, 1.0);
        std::vector<double> teleport(n, (1.0 - alpha) / static_cast<double>(n));
        if (previous) {
            std::vector<double> jump(n);
            double jump_sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double x = std::max((*previous)[i], params.epsilon_floor);
                bias[i] = std::pow(x, params.beta);
                jump[i] = std::pow(x, params.gamma);
                jump_sum += jump[i];
            }
            const double mean = jump_sum / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                teleport[i] = (1.0 - alpha) * jump[i] / (mean * static_cast<double>(n));
            }
        }
        std::vector<double> scores =
            power_iterate(gather_rows(tensor.layer(kind), default_direction(kind)), alpha, bias, teleport,
                          params.tol, params.max_iter, to_string(kind));
        previous = scores;
        RankVector rv{std::move(scores), label_of(kind)};
        switch (kind) {
            case LayerKind::empowerment: out.empowerment = std::move(rv); break;
            case LayerKind::collaboration: out.collaboration = std::move(rv); break;
            case LayerKind::credibility: out.credibility = std::move(rv); break;
        }
    }
    out.leadership = RankVector{*previous, RankLabel::leadership};
    return out;
}

RankVector brokerage(const UndirectedGraph& graph) {
    const std::size_t n = graph.n();
    RankVector out{std::vector<double>(n, 0.0), RankLabel::brokerage};
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& nb = graph.adjacency[v];
        std::size_t open_pairs = 0;
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                if (!graph.has_edge(nb[a], nb[b])) {
                    ++open_pairs;
                }
            }
        }
        out.scores[v] = static_cast<double>(open_pairs);
        total += out.scores[v];
    }
    if (n == 0) {
        return out;
    }
    for (double& s : out.scores) {
        s = total > 0.0 ? s / total : 1.0 / static_cast<double>(n);
    }
    return out;
}

}  // namespace leadnet

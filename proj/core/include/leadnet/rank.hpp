#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "leadnet/multiplex.hpp"

namespace leadnet {

enum class RankLabel { empowerment, collaboration, credibility, leadership, brokerage, pagerank };

std::string_view to_string(RankLabel label);

/// Non-negative scores over the corpus user index, summing to one.
struct RankVector {
    std::vector<double> scores;
    RankLabel label = RankLabel::pagerank;

    std::size_t size() const { return scores.size(); }
    double operator[](std::size_t i) const { return scores[i]; }
};

/// How a layer is walked.
///
///   as_is:      r_i gathers over edges j->i (classic in-link PageRank).
///   transposed: r_i gathers over edges i->j, so out-weight collects rank.
///
/// Empowerment and collaboration are walked transposed, credibility as_is.
enum class Direction { as_is, transposed };

Direction default_direction(LayerKind kind);

/// Carries the last iterate when power iteration runs out of iterations.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string layer, std::vector<double> last_iterate, double residual);

    const std::string& layer() const { return layer_; }
    const std::vector<double>& last_iterate() const { return last_iterate_; }
    double residual() const { return residual_; }

private:
    std::string layer_;
    std::vector<double> last_iterate_;
    double residual_;
};

/// Power iteration of r <- alpha * G r + (1 - alpha) / N followed by L1
/// renormalisation, starting from the uniform vector and stopping once the
/// L1 change drops below `tol`.
RankVector pagerank(const Layer& layer, Direction direction, double alpha, double tol = 1e-9,
                    int max_iter = 1000);

struct MprParams {
    /// Damping of the first, second and third processed layer.
    std::array<double, 3> alpha{0.85, 0.85, 0.85};
    double beta = 1.0;
    double gamma = 1.0;
    std::array<LayerKind, 3> layer_order{LayerKind::empowerment, LayerKind::collaboration, LayerKind::credibility};
    double tol = 1e-9;
    int max_iter = 1000;
    /// Lower bound applied to the previous layer's ranks before they are
    /// raised to beta / gamma.
    double epsilon_floor = 1e-12;

    /// Throws ContractViolation describing the first invalid field.
    void validate() const;
};

struct MultiplexRanks {
    RankVector empowerment;
    RankVector collaboration;
    RankVector credibility;
    RankVector leadership;

    const RankVector& layer(LayerKind kind) const;
};

/// Layer-chained multiplex PageRank.
///
/// The first layer in `layer_order` is plain PageRank. Each later layer k
/// iterates, with x the previous layer's converged ranks,
///
///     r_i <- alpha_k * x_i^beta * sum_j G_k[i][j] r_j
///            + (1 - alpha_k) * x_i^gamma / (mean(x^gamma) * N)
///
/// renormalising to unit L1 mass after each step. The last layer's vector is
/// the leadership rank.
MultiplexRanks multiplex_pagerank(const MultiplexTensor& tensor, const MprParams& params = {});

/// Ego-network brokerage: for each node the number of unordered neighbour
/// pairs that are not directly linked, normalised to unit sum (uniform when
/// every count is zero).
RankVector brokerage(const UndirectedGraph& graph);

}  // namespace leadnet

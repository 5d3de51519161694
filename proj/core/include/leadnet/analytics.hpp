#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leadnet/ingest.hpp"
#include "leadnet/multiplex.hpp"
#include "leadnet/rank.hpp"

namespace leadnet {

/// Same-gender answering rates for one window. Comments whose commenter or
/// resolved recipient has unknown gender, and comments a user addresses to
/// themself, are left out of every count.
struct HomophilyReport {
    std::size_t window = 0;
    std::optional<double> p_ww;  // women answering women
    std::optional<double> p_mm;  // men answering men
    std::optional<double> prior_w;  // share of gender-known thread authorships held by women
    std::optional<double> prior_m;
    std::size_t ww = 0, w_total = 0;
    std::size_t mm = 0, m_total = 0;
    std::size_t threads_w = 0, threads_known = 0;
};

HomophilyReport homophily(const WindowSlice& slice);

/// Users authoring or commenting a thread of the slice, or rating one of its
/// messages.
std::vector<bool> active_users(const WindowSlice& slice);

struct TopMassEntry {
    std::size_t window = 0;
    RankLabel label = RankLabel::leadership;
    std::size_t k = 0;
    std::size_t women_in_top = 0;
    /// Women among the gender-known members of the top-K set.
    std::optional<double> mass_w;
    std::optional<double> prior_w;
    std::size_t n_active = 0;
};

/// Women's share of the K highest-ranked active users (ties by user_id).
/// K larger than the active population is clamped with a diagnostic.
TopMassEntry top_mass(const RankVector& rank, const std::vector<UserRef>& users, const std::vector<bool>& active,
                      std::size_t k, std::vector<Diagnostic>* diagnostics = nullptr);

/// ceil(N_active / 10), at least 1 when anyone is active.
std::size_t top_decile(std::size_t n_active);

enum class GroupBy { author_role, author_gender };

struct ResponseRow {
    std::string group;
    std::optional<double> mean_latency_seconds;  // over threads that got a reply
    std::size_t comment_count = 0;
    std::size_t thread_count = 0;
};

/// Reply behaviour grouped by the thread author's role or gender. Latency is
/// the delay of the first comment; threads without comments only count
/// towards thread_count. Groups with unknown attributes are omitted.
std::vector<ResponseRow> response_stats(const WindowSlice& slice, GroupBy group_by);

struct RoleSubgraph {
    std::vector<std::size_t> nodes;  // corpus user indices, ascending
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // corpus indices, a < b
};

/// Induced subgraph of `graph` on users whose role is in `roles`.
/// Isolated matching users stay in the node list.
RoleSubgraph role_subgraph(const UndirectedGraph& graph, const std::vector<UserRef>& users, const std::set<Role>& roles,
                           std::vector<Diagnostic>* diagnostics = nullptr);

}  // namespace leadnet

#include "leadnet/analytics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace leadnet {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

HomophilyReport homophily(const WindowSlice& slice) {
    HomophilyReport rep;
    rep.window = slice.index;
    for (std::size_t ti : slice.threads) {
        const ThreadRecord& t = slice.corpus->threads[ti];
        if (t.author.gender != Gender::unknown) {
            ++rep.threads_known;
            if (t.author.gender == Gender::female) {
                ++rep.threads_w;
            }
        }
        const std::vector<UserRef> recipients = resolve_recipients(t);
        for (std::size_t ci = 0; ci < t.comments.size(); ++ci) {
            const UserRef& from = t.comments[ci].author;
            const UserRef& to = recipients[ci];
            if (from.user_id == to.user_id || from.gender == Gender::unknown || to.gender == Gender::unknown) {
                continue;
            }
            if (from.gender == Gender::female) {
                ++rep.w_total;
                rep.ww += to.gender == Gender::female ? 1 : 0;
            } else {
                ++rep.m_total;
                rep.mm += to.gender == Gender::male ? 1 : 0;
            }
        }
    }
    rep.p_ww = ratio(rep.ww, rep.w_total);
    rep.p_mm = ratio(rep.mm, rep.m_total);
    rep.prior_w = ratio(rep.threads_w, rep.threads_known);
    rep.prior_m = ratio(rep.threads_known - rep.threads_w, rep.threads_known);
    return rep;
}

std::vector<bool> active_users(const WindowSlice& slice) {
    const Corpus& corpus = *slice.corpus;
    std::vector<bool> active(corpus.n_users(), false);
    for (std::size_t ti : slice.threads) {
        const ThreadRecord& t = corpus.threads[ti];
        active[corpus.index_of(t.author.user_id)] = true;
        for (const auto& c : t.comments) {
            active[corpus.index_of(c.author.user_id)] = true;
        }
    }
    for (std::size_t ri : slice.ratings) {
        active[corpus.index_of(corpus.ratings[ri].rater.user_id)] = true;
    }
    return active;
}

std::size_t top_decile(std::size_t n_active) {
    return (n_active + 9) / 10;
}

TopMassEntry top_mass(const RankVector& rank, const std::vector<UserRef>& users, const std::vector<bool>& active,
                      std::size_t k, std::vector<Diagnostic>* diagnostics) {
    if (k < 1) {
        throw ContractViolation("top_mass needs K >= 1");
    }
    if (rank.size() != users.size() || active.size() != users.size()) {
        throw ContractViolation("rank, users and activity mask must have equal length");
    }
    TopMassEntry e;
    e.label = rank.label;
    std::vector<std::size_t> pool;
    std::size_t women_active = 0, known_active = 0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (!active[i]) {
            continue;
        }
        pool.push_back(i);
        if (users[i].gender != Gender::unknown) {
            ++known_active;
            women_active += users[i].gender == Gender::female ? 1 : 0;
        }
    }
    e.n_active = pool.size();
    e.prior_w = ratio(women_active, known_active);
    if (k > pool.size()) {
        if (diagnostics != nullptr) {
            diagnostics->push_back({0, "top-K of " + std::to_string(k) + " exceeds " + std::to_string(pool.size()) +
                                           " active users; clamped"});
        }
        k = pool.size();
    }
    e.k = k;
    // Users are indexed in user_id order, so index order is the id tie-break.
    std::stable_sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) { return rank[a] > rank[b]; });
    std::size_t known_top = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const Gender g = users[pool[i]].gender;
        if (g != Gender::unknown) {
            ++known_top;
            e.women_in_top += g == Gender::female ? 1 : 0;
        }
    }
    e.mass_w = ratio(e.women_in_top, known_top);
    return e;
}

std::vector<ResponseRow> response_stats(const WindowSlice& slice, GroupBy group_by) {
    struct Acc {
        double latency_sum = 0.0;
        std::size_t replied = 0;
        std::size_t comments = 0;
        std::size_t threads = 0;
    };
    std::map<std::string, Acc> groups;
    for (std::size_t ti : slice.threads) {
        const ThreadRecord& t = slice.corpus->threads[ti];
        std::string key;
        if (group_by == GroupBy::author_role) {
            if (t.author.role == Role::unknown) continue;
            key = std::string(to_string(t.author.role));
        } else {
            if (t.author.gender == Gender::unknown) continue;
            key = t.author.gender == Gender::female ? "female" : "male";
        }
        Acc& acc = groups[key];
        ++acc.threads;
        acc.comments += t.comments.size();
        if (!t.comments.empty()) {
            acc.latency_sum += static_cast<double>(t.comments.front().created_at - t.published_at);
            ++acc.replied;
        }
    }
    std::vector<ResponseRow> rows;
    for (const auto& [key, acc] : groups) {
        ResponseRow row{key, std::nullopt, acc.comments, acc.threads};
        if (acc.replied > 0) {
            row.mean_latency_seconds = acc.latency_sum / static_cast<double>(acc.replied);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RoleSubgraph role_subgraph(const UndirectedGraph& graph, const std::vector<UserRef>& users, const std::set<Role>& roles,
                           std::vector<Diagnostic>* diagnostics) {
    if (roles.empty()) {
        throw ContractViolation("role filter must not be empty");
    }
    if (graph.n() != users.size()) {
        throw ContractViolation("graph and user list disagree on N");
    }
    RoleSubgraph sub;
    std::vector<bool> keep(users.size(), false);
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (roles.contains(users[i].role)) {
            keep[i] = true;
            sub.nodes.push_back(i);
        }
    }
    if (sub.nodes.empty() && diagnostics != nullptr) {
        diagnostics->push_back({0, "role filter matched no users; subgraph is empty"});
    }
    for (auto [a, b] : graph.edges()) {
        if (keep[a] && keep[b]) {
            sub.edges.emplace_back(a, b);
        }
    }
    return sub;
}

}  // namespace leadnet

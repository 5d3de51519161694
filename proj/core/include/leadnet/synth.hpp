#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leadnet/ingest.hpp"
#include "leadnet/topics.hpp"

namespace leadnet {

/// Parameters of a synthetic corpus with planted ground truth.
struct SyntheticSpec {
    std::size_t n_users = 200;
    double gender_prior_w = 0.24;
    /// Relative weights of manager, director, consultant, senior_consultant,
    /// partner, external.
    std::array<double, 6> role_weights{0.10, 0.05, 0.40, 0.25, 0.05, 0.15};
    std::size_t n_threads = 1000;
    /// Mean of the geometric number of comments per thread.
    double mean_comments = 3.0;
    /// P(commenter is a woman | thread authored by a woman). When unset the
    /// commenter's gender is independent of the author's.
    std::optional<double> homophily_p_ww;
    double base_latency_seconds = 6 * 3600.0;
    /// Multiplies reply delays on manager-authored threads (< 1 is faster).
    double manager_latency_factor = 1.0;
    /// Women author threads this many times as often as men.
    double women_activity_uplift = 1.0;
    double like_rate = 0.30;
    double dislike_rate = 0.05;
    Timestamp start = 1388534400;  // 2014-01-01T00:00:00Z
    int span_days = 365;
    std::uint64_t seed = 1;

    /// Throws ContractViolation for infeasible combinations.
    void validate() const;
    /// Probability that a thread author is a woman.
    double author_prior_w() const;
    /// P(commenter is a woman | male-authored thread), chosen so that women
    /// make up the same share of commenters as of authors.
    double cross_rate_w() const;
};

/// Deterministic for a given spec. Draw order: user genders and roles (one
/// user at a time), then per thread: author, publication time, concept pool,
/// title, description and its comments (gender, user, delay, text), then one
/// rating draw per message in thread/comment order.
Corpus generate(const SyntheticSpec& spec);

/// The two disjoint concept pools used for message text, as display names.
const std::array<std::vector<std::string>, 2>& concept_pools();

/// Lexicon and stopword files matching the generated text.
std::string bundled_lexicon_tsv();
std::string bundled_stopwords();
ConceptLexicon bundled_lexicon();

}  // namespace leadnet

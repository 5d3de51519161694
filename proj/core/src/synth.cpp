#include "leadnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "leadnet/time.hpp"

namespace leadnet {

namespace {

struct VocabularyEntry {
    const char* surface;
    const char* concept_id;
    const char* language;
    int pool;  // -1: synonym only, not used for generation
};

// The first surface of each concept is the one written into messages.
constexpr VocabularyEntry vocabulary[] = {
    {"carta di credito", "bn:credit_card", "it", 0},
    {"credit card", "bn:credit_card", "en", -1},
    {"pagamenti online", "bn:online_payment", "it", 0},
    {"online payments", "bn:online_payment", "en", -1},
    {"mobile pos", "bn:mobile_pos", "en", 0},
    {"user experience", "bn:user_experience", "en", 0},
    {"metodo di pagamento", "bn:payment_method", "it", 0},
    {"payment method", "bn:payment_method", "en", -1},
    {"sistemi di pagamento", "bn:payment_system", "it", 0},
    {"american express", "bn:american_express", "en", 0},
    {"gestione coupon", "bn:coupon_management", "it", 0},
    {"digital marketing", "bn:digital_marketing", "en", 1},
    {"investimenti online", "bn:online_investment", "it", 1},
    {"analisi", "bn:analysis", "it", 1},
    {"analysis", "bn:analysis", "en", -1},
    {"performance", "bn:performance", "en", 1},
    {"social media", "bn:social_media", "en", 1},
    {"brand awareness", "bn:brand_awareness", "en", 1},
    {"content strategy", "bn:content_strategy", "en", 1},
    {"customer engagement", "bn:customer_engagement", "en", 1},
};

constexpr const char* stopwords[][2] = {
    {"di", "it"},  {"delle", "it"}, {"del", "it"},  {"della", "it"}, {"dei", "it"}, {"per", "it"},
    {"con", "it"}, {"the", "en"},   {"of", "en"},   {"for", "en"},   {"with", "en"}, {"and", "en"},
    {"der", "de"}, {"die", "de"},   {"das", "de"},  {"und", "de"},   {"für", "de"},
};

constexpr const char* fillers[] = {"ok",    "thanks",  "team",  "proposal", "feedback", "proceed",
                                   "call",  "update",  "review", "draft",   "ciao",     "grazie"};

/// splitmix64; chosen over <random> distributions, whose outputs differ
/// between standard library implementations.
class DrawSource {
public:
    explicit DrawSource(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    std::size_t below(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }
    double exponential(double mean) { return -std::log1p(-uniform()) * mean; }
    /// Failures before the first success, with the given mean.
    std::size_t geometric(double mean) {
        if (mean <= 0.0) {
            return 0;
        }
        const double p = 1.0 / (1.0 + mean);
        return static_cast<std::size_t>(std::floor(std::log1p(-uniform()) / std::log1p(-p)));
    }

private:
    std::uint64_t state_;
};

const std::array<std::vector<std::string>, 2>& pool_surfaces() {
    static const auto pools = [] {
        std::array<std::vector<std::string>, 2> p;
        for (const auto& e : vocabulary) {
            if (e.pool >= 0) {
                p[static_cast<std::size_t>(e.pool)].emplace_back(e.surface);
            }
        }
        return p;
    }();
    return pools;
}

std::string message_text(DrawSource& rng, int pool, std::size_t n_concepts) {
    const auto& surfaces = pool_surfaces()[static_cast<std::size_t>(pool)];
    std::string text;
    for (std::size_t i = 0; i < n_concepts; ++i) {
        if (i > 0) {
            text += ' ';
            text += fillers[rng.below(std::size(fillers))];
            text += ' ';
        }
        text += surfaces[rng.below(surfaces.size())];
    }
    return text;
}

std::string numbered(const char* prefix, std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
    return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (n_users < 2) {
        throw ContractViolation("synthetic corpus needs at least two users");
    }
    if (n_threads < 1) {
        throw ContractViolation("synthetic corpus needs at least one thread");
    }
    if (!prob(gender_prior_w) || !prob(like_rate) || !prob(dislike_rate) || like_rate + dislike_rate > 1.0) {
        throw ContractViolation("synthetic probabilities must lie in [0, 1] with like_rate + dislike_rate <= 1");
    }
    if (homophily_p_ww && !prob(*homophily_p_ww)) {
        throw ContractViolation("homophily_p_ww must lie in [0, 1]");
    }
    if (!(manager_latency_factor > 0.0) || !(base_latency_seconds > 0.0)) {
        throw ContractViolation("latencies must be positive");
    }
    if (!(women_activity_uplift >= 1.0)) {
        throw ContractViolation("women_activity_uplift must be >= 1");
    }
    if (!(mean_comments >= 0.0) || span_days < 1) {
        throw ContractViolation("mean_comments must be >= 0 and span_days >= 1");
    }
    if (std::all_of(role_weights.begin(), role_weights.end(), [](double w) { return w <= 0.0; }) ||
        std::any_of(role_weights.begin(), role_weights.end(), [](double w) { return w < 0.0; })) {
        throw ContractViolation("role weights must be non-negative with a positive total");
    }
    const double q = cross_rate_w();
    if (!prob(q)) {
        throw ContractViolation("homophily rate cannot be planted at this gender prior");
    }
}

double SyntheticSpec::author_prior_w() const {
    const double w = gender_prior_w * women_activity_uplift;
    return w / (w + (1.0 - gender_prior_w));
}

double SyntheticSpec::cross_rate_w() const {
    const double pa = author_prior_w();
    const double p = homophily_p_ww.value_or(pa);
    if (pa >= 1.0) {
        return p;
    }
    return pa * (1.0 - p) / (1.0 - pa);
}

Corpus generate(const SyntheticSpec& spec) {
    spec.validate();
    DrawSource rng(spec.seed);

    std::vector<UserRef> users(spec.n_users);
    std::array<std::vector<std::size_t>, 2> by_gender;  // [male, female]
    const double role_total = spec.role_weights[0] + spec.role_weights[1] + spec.role_weights[2] +
                              spec.role_weights[3] + spec.role_weights[4] + spec.role_weights[5];
    constexpr Role roles[] = {Role::manager, Role::director, Role::consultant, Role::senior_consultant,
                              Role::partner, Role::external};
    for (std::size_t i = 0; i < spec.n_users; ++i) {
        UserRef& u = users[i];
        u.user_id = numbered("u", i, 5);
        u.gender = rng.bernoulli(spec.gender_prior_w) ? Gender::female : Gender::male;
        double pick = rng.uniform() * role_total;
        u.role = Role::external;
        for (std::size_t r = 0; r < 6; ++r) {
            if (pick < spec.role_weights[r]) {
                u.role = roles[r];
                break;
            }
            pick -= spec.role_weights[r];
        }
        by_gender[u.gender == Gender::female ? 1 : 0].push_back(i);
    }

    // Uniform user of the requested gender other than `exclude`, falling back
    // to the other gender when the group is empty.
    auto pick_user = [&](bool female, std::optional<std::size_t> exclude) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            const auto& group = by_gender[(female != (attempt == 1)) ? 1 : 0];
            const auto pos = exclude ? static_cast<std::size_t>(
                                           std::lower_bound(group.begin(), group.end(), *exclude) - group.begin())
                                     : group.size();
            const bool excluded = pos < group.size() && group[pos] == *exclude;
            const std::size_t eligible = group.size() - (excluded ? 1 : 0);
            if (eligible == 0) {
                continue;
            }
            std::size_t k = rng.below(eligible);
            if (excluded && k >= pos) {
                ++k;
            }
            return group[k];
        }
        throw ContractViolation("no eligible user");
    };

    const double author_w = spec.author_prior_w();
    const double p_ww = spec.homophily_p_ww.value_or(author_w);
    const double q_w = spec.cross_rate_w();
    const auto span_seconds = static_cast<std::size_t>(spec.span_days) * static_cast<std::size_t>(seconds_per_day);

    std::vector<ThreadRecord> threads;
    threads.reserve(spec.n_threads);
    std::vector<std::vector<std::size_t>> message_authors;  // thread author, then comment authors
    std::size_t comment_counter = 0;
    for (std::size_t t = 0; t < spec.n_threads; ++t) {
        ThreadRecord thread;
        thread.thread_id = numbered("t", t, 6);
        const std::size_t author = pick_user(rng.bernoulli(author_w), std::nullopt);
        thread.author = users[author];
        std::vector<std::size_t> authors{author};
        thread.published_at = spec.start + static_cast<Timestamp>(rng.below(span_seconds));
        const int pool = rng.bernoulli(0.5) ? 1 : 0;
        thread.title = message_text(rng, pool, 2);
        thread.description = message_text(rng, pool, 3);
        thread.tags = {pool == 0 ? "payments" : "marketing"};

        const std::size_t n_comments = rng.geometric(spec.mean_comments);
        const bool author_female = thread.author.gender == Gender::female;
        const double delay_mean =
            spec.base_latency_seconds * (thread.author.role == Role::manager ? spec.manager_latency_factor : 1.0);
        double clock = static_cast<double>(thread.published_at);
        for (std::size_t c = 0; c < n_comments; ++c) {
            CommentRecord comment;
            comment.comment_id = numbered("c", comment_counter++, 7);
            const bool commenter_female = rng.bernoulli(author_female ? p_ww : q_w);
            const std::size_t commenter = pick_user(commenter_female, author);
            comment.author = users[commenter];
            authors.push_back(commenter);
            clock += rng.exponential(delay_mean);
            comment.created_at = static_cast<Timestamp>(std::floor(clock));
            comment.text = message_text(rng, pool, 2);
            thread.comments.push_back(std::move(comment));
        }
        // Generation order is chronological; equal seconds fall back to id order.
        int k = 1;
        for (auto& c : thread.comments) {
            c.order_k = k++;
        }
        threads.push_back(std::move(thread));
        message_authors.push_back(std::move(authors));
    }

    std::vector<RatingEvent> ratings;
    auto rate = [&](const std::string& message_id, std::size_t author_index) {
        const double u = rng.uniform();
        if (u >= spec.like_rate + spec.dislike_rate) {
            return;
        }
        const int value = u < spec.like_rate ? 1 : -1;
        const bool female = rng.bernoulli(spec.gender_prior_w);
        const std::size_t rater = pick_user(female, author_index);
        ratings.push_back(RatingEvent{users[rater], message_id, value});
    };
    for (std::size_t t = 0; t < threads.size(); ++t) {
        rate(threads[t].thread_id, message_authors[t][0]);
        for (std::size_t c = 0; c < threads[t].comments.size(); ++c) {
            rate(threads[t].comments[c].comment_id, message_authors[t][c + 1]);
        }
    }
    return build_corpus(std::move(threads), std::move(ratings));
}

const std::array<std::vector<std::string>, 2>& concept_pools() {
    static const auto pools = [] {
        std::array<std::vector<std::string>, 2> p;
        for (std::size_t i = 0; i < 2; ++i) {
            for (const auto& s : pool_surfaces()[i]) {
                std::string name = s;
                std::replace(name.begin(), name.end(), ' ', '_');
                p[i].push_back(std::move(name));
            }
        }
        return p;
    }();
    return pools;
}

std::string bundled_lexicon_tsv() {
    std::string out = "# surface\tconcept_id\tlanguage\n";
    for (const auto& e : vocabulary) {
        out += std::string(e.surface) + '\t' + e.concept_id + '\t' + e.language + '\n';
    }
    return out;
}

std::string bundled_stopwords() {
    std::string out;
    for (const auto& s : stopwords) {
        out += std::string(s[0]) + '\t' + s[1] + '\n';
    }
    return out;
}

ConceptLexicon bundled_lexicon() {
    ConceptLexicon lex;
    std::istringstream lexicon_in(bundled_lexicon_tsv());
    lex.read_tsv(lexicon_in);
    std::istringstream stop_in(bundled_stopwords());
    lex.read_stopwords(stop_in);
    return lex;
}

}  // namespace leadnet

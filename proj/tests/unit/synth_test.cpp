#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "leadnet/synth.hpp"

namespace leadnet {
namespace {

std::string serialise(const Corpus& c) {
    std::ostringstream out;
    write_thread_log(out, c);
    write_ratings(out, c);
    return out.str();
}

TEST(Synth, SameSeedSameBytes) {
    SyntheticSpec spec;
    spec.n_users = 100;
    spec.gender_prior_w = 0.24;
    spec.seed = 7;
    EXPECT_EQ(serialise(generate(spec)), serialise(generate(spec)));
    SyntheticSpec other = spec;
    other.seed = 8;
    EXPECT_NE(serialise(generate(spec)), serialise(generate(other)));
}

TEST(Synth, WomenFractionAtLargeN) {
    SyntheticSpec spec;
    spec.n_users = 10000;
    spec.n_threads = 60000;
    spec.mean_comments = 0.0;
    spec.like_rate = 0.0;
    spec.dislike_rate = 0.0;
    spec.seed = 3;
    // only authors make it into the corpus; at six threads per user nearly all do
    const Corpus c = generate(spec);
    ASSERT_GT(c.n_users(), 9900u);
    std::size_t women = 0;
    for (const auto& u : c.users) {
        women += u.gender == Gender::female ? 1 : 0;
    }
    EXPECT_NEAR(static_cast<double>(women) / static_cast<double>(c.n_users()), 0.24, 0.01);
}

TEST(Synth, WellFormedCorpus) {
    SyntheticSpec spec;
    spec.seed = 5;
    const Corpus c = generate(spec);
    EXPECT_EQ(c.threads.size(), spec.n_threads);
    EXPECT_TRUE(c.diagnostics.empty());
    for (const auto& t : c.threads) {
        EXPECT_GE(t.published_at, spec.start);
        EXPECT_LT(t.published_at, spec.start + Timestamp{spec.span_days} * 86400);
        Timestamp prev = t.published_at;
        for (const auto& cm : t.comments) {
            EXPECT_GE(cm.created_at, prev);
            EXPECT_NE(cm.author.user_id, t.author.user_id);
            prev = cm.created_at;
        }
    }
    for (const auto& r : c.ratings) {
        EXPECT_TRUE(r.value == 1 || r.value == -1);
        const MessageRef* m = c.message(r.target_message_id);
        ASSERT_NE(m, nullptr);
        EXPECT_NE(c.users[m->author].user_id, r.rater.user_id);
    }
}

TEST(Synth, TextDrawsFromOnePoolPerThread) {
    SyntheticSpec spec;
    spec.seed = 2;
    spec.n_threads = 100;
    const Corpus c = generate(spec);
    const ConceptLexicon lex = bundled_lexicon();
    const auto& pools = concept_pools();
    const std::set<std::string> pool0(pools[0].begin(), pools[0].end());
    const std::set<std::string> pool1(pools[1].begin(), pools[1].end());
    for (const auto& t : c.threads) {
        bool in0 = false, in1 = false;
        for (const auto& gram : thread_ngrams(t, lex, 1)) {
            in0 = in0 || pool0.contains(gram);
            in1 = in1 || pool1.contains(gram);
        }
        EXPECT_TRUE(in0 != in1) << t.thread_id;
    }
}

TEST(Synth, CrossRateBalancesCommenters) {
    SyntheticSpec spec;
    spec.gender_prior_w = 0.24;
    spec.homophily_p_ww = 0.48;
    EXPECT_DOUBLE_EQ(spec.author_prior_w(), 0.24);
    const double pa = spec.author_prior_w();
    const double q = spec.cross_rate_w();
    EXPECT_NEAR(pa * 0.48 + (1 - pa) * q, pa, 1e-15);
    spec.women_activity_uplift = 2.0;
    EXPECT_NEAR(spec.author_prior_w(), 0.48 / 1.24, 1e-15);
}

TEST(Synth, RejectsInfeasibleSpecs) {
    auto rejects = [](auto mutate) {
        SyntheticSpec spec;
        mutate(spec);
        EXPECT_THROW(generate(spec), ContractViolation);
    };
    rejects([](SyntheticSpec& s) { s.n_users = 0; });
    rejects([](SyntheticSpec& s) { s.n_threads = 0; });
    rejects([](SyntheticSpec& s) { s.gender_prior_w = 1.2; });
    rejects([](SyntheticSpec& s) { s.like_rate = 0.8; s.dislike_rate = 0.3; });
    rejects([](SyntheticSpec& s) { s.homophily_p_ww = -0.1; });
    rejects([](SyntheticSpec& s) { s.manager_latency_factor = 0.0; });
    rejects([](SyntheticSpec& s) { s.women_activity_uplift = 0.5; });
    rejects([](SyntheticSpec& s) { s.role_weights = {0, 0, 0, 0, 0, 0}; });
    rejects([](SyntheticSpec& s) { s.gender_prior_w = 0.9; s.homophily_p_ww = 0.1; });
}

TEST(Synth, BundledLexiconParses) {
    std::istringstream tsv(bundled_lexicon_tsv());
    std::istringstream stops(bundled_stopwords());
    ConceptLexicon lex;
    EXPECT_TRUE(lex.read_tsv(tsv).empty());
    EXPECT_TRUE(lex.read_stopwords(stops).empty());
    EXPECT_EQ(lex.size(), bundled_lexicon().size());
}

}  // namespace
}  // namespace leadnet

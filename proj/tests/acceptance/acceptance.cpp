// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   leadnet_acceptance --cli <path to leadnet> --fixture <dir with threads.jsonl, ...>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "leadnet/analytics.hpp"
#include "leadnet/multiplex.hpp"
#include "leadnet/pipeline.hpp"
#include "leadnet/rank.hpp"
#include "leadnet/synth.hpp"
#include "leadnet/topics.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"
#include "support/tree.hpp"

namespace fs = std::filesystem;
using namespace leadnet;
using namespace leadnet::test;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream out;
    out.precision(precision);
    out << v;
    return out.str();
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        return INFINITY;
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

bool is_probability(const std::vector<double>& r) {
    double total = 0.0;
    for (double v : r) {
        if (!std::isfinite(v) || v < 0.0) {
            return false;
        }
        total += v;
    }
    return !r.empty() && std::abs(total - 1.0) < 1e-9;
}

// ------------------------------------------------------------------ 1

Outcome stochasticity() {
    const auto t0 = Clock::now();
    SyntheticSpec spec;
    spec.n_threads = 1000;
    spec.n_users = 200;
    spec.seed = 42;
    const Corpus c = generate(spec);
    const MultiplexTensor m = build_tensor(whole_corpus(c));
    double worst = 0.0;
    std::size_t checked = 0;
    auto check = [&](const Layer& l, bool by_column) {
        std::vector<double> sums(l.n(), 0.0);
        std::vector<bool> seen(l.n(), false);
        for (const Edge& e : l.edges()) {
            const std::size_t key = by_column ? e.dst : e.src;
            sums[key] += e.weight;
            seen[key] = true;
        }
        for (std::size_t i = 0; i < l.n(); ++i) {
            if (seen[i]) {
                worst = std::max(worst, std::abs(sums[i] - 1.0));
                ++checked;
            }
        }
    };
    check(m.empowerment, true);
    check(m.collaboration, true);
    check(m.credibility, false);
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 5.0 && checked > 0,
            std::to_string(checked) + " constrained sums, max |sum-1| = " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 2

Outcome monoplex_reduction() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 199;
        const double density = std::min(0.5, 4.0 / static_cast<double>(n) + 0.02 * static_cast<double>(rng() % 10));
        const MultiplexTensor m = random_tensor(rng, n, density);
        MprParams p;
        p.beta = 0.0;
        p.gamma = 0.0;
        p.alpha = {0.5 + 0.45 * static_cast<double>(rng() % 100) / 100.0, 0.85, 0.6};
        const MultiplexRanks r = multiplex_pagerank(m, p);
        for (std::size_t pos = 0; pos < 3; ++pos) {
            const LayerKind k = p.layer_order[pos];
            const RankVector mono = pagerank(m.layer(k), default_direction(k), p.alpha[pos], p.tol, p.max_iter);
            worst = std::max(worst, linf(r.layer(k).scores, mono.scores));
        }
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-8 && secs < 10.0, "50 tensors, max L_inf = " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ 3

Outcome pagerank_oracle_match() {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        const Orientation o = trial % 2 == 0 ? Orientation::receiver_normalized : Orientation::sender_normalized;
        const Layer l = random_layer(rng, n, 0.05 + 0.3 * static_cast<double>(rng() % 10) / 10.0, o);
        const Direction d = trial % 4 < 2 ? Direction::as_is : Direction::transposed;
        const double alpha = 0.5 + 0.45 * static_cast<double>(rng() % 100) / 100.0;
        const RankVector r = pagerank(l, d, alpha, 1e-13, 100000);
        worst = std::max(worst, linf(r.scores, pagerank_oracle(l, d == Direction::transposed, alpha)));
    }
    return {worst < 1e-9, "100 layers, max L_inf vs dense solve = " + fmt(worst)};
}

// ------------------------------------------------------------------ 4

Outcome eq5_oracle() {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng() % 8;
        const MultiplexTensor m = random_tensor(rng, n, 0.3 + 0.05 * static_cast<double>(trial % 5));
        MprParams p;
        std::vector<int> order{0, 1, 2};
        if (trial % 2 == 1) {
            p.beta = 0.5;
            p.gamma = 0.75;
            p.alpha = {0.9, 0.8, 0.7};
            p.layer_order = {LayerKind::credibility, LayerKind::collaboration, LayerKind::empowerment};
            order = {2, 1, 0};
        }
        p.tol = 1e-13;
        p.max_iter = 100000;
        const auto ref = scripted_multiplex(m, order, {p.alpha[0], p.alpha[1], p.alpha[2]}, p.beta, p.gamma);
        const MultiplexRanks r = multiplex_pagerank(m, p);
        worst = std::max({worst, linf(r.empowerment.scores, ref[0]), linf(r.collaboration.scores, ref[1]),
                          linf(r.credibility.scores, ref[2])});
    }
    return {worst < 1e-8, "20 tensors, max L_inf vs scripted iteration = " + fmt(worst)};
}

// ------------------------------------------------------------------ 5

Outcome clique_oracle() {
    std::mt19937_64 rng(5);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng() % 13;
        const UndirectedGraph g = random_graph(rng, n, 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0);
        const auto cliques = bron_kerbosch(g);
        const std::set<std::vector<std::size_t>> got(cliques.begin(), cliques.end());
        if (got.size() != cliques.size() || got != brute_force_cliques(g)) {
            ++mismatches;
        }
    }
    return {mismatches == 0, "200 graphs, " + std::to_string(mismatches) + " mismatches"};
}

// ------------------------------------------------------------------ 6

Outcome homophily_recovery() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SyntheticSpec spec;
        spec.n_users = 1000;
        spec.n_threads = 20000;
        spec.mean_comments = 0.5;
        spec.gender_prior_w = 0.24;
        spec.homophily_p_ww = 0.48;
        spec.seed = seed;
        const Corpus c = generate(spec);
        std::size_t comments = 0;
        for (const auto& t : c.threads) {
            comments += t.comments.size();
        }
        const HomophilyReport r = homophily(whole_corpus(c));
        const bool pass = r.p_ww && r.prior_w && std::abs(*r.p_ww - 0.48) <= 0.02 && std::abs(*r.prior_w - 0.24) <= 0.01;
        ok = ok && pass;
        detail += (seed > 1 ? "; " : "") + std::string("seed ") + std::to_string(seed) + ": p_ww=" +
                  (r.p_ww ? fmt(*r.p_ww) : "absent") + " prior=" + (r.prior_w ? fmt(*r.prior_w) : "absent") + " (" +
                  std::to_string(comments) + " comments)";
    }
    return {ok, detail};
}

// ------------------------------------------------------------------ 7

Outcome leadership_uplift() {
    auto mean_mass = [](double uplift, double* mean_prior) {
        double mass = 0.0, prior = 0.0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            SyntheticSpec spec;
            spec.n_users = 300;
            spec.n_threads = 1000;
            spec.gender_prior_w = 0.24;
            spec.women_activity_uplift = uplift;
            spec.seed = seed;
            const Corpus c = generate(spec);
            const WindowSlice all = whole_corpus(c);
            const MultiplexRanks r = multiplex_pagerank(build_tensor(all));
            const auto active = active_users(all);
            const std::size_t n_active = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
            const TopMassEntry e = top_mass(r.leadership, c.users, active, top_decile(n_active));
            mass += e.mass_w.value_or(0.0);
            prior += e.prior_w.value_or(0.0);
        }
        *mean_prior = prior / 20.0;
        return mass / 20.0;
    };
    double prior_up = 0.0, prior_flat = 0.0;
    const double up = mean_mass(2.0, &prior_up);
    const double flat = mean_mass(1.0, &prior_flat);
    const bool ok = up > 0.24 && std::abs(flat - prior_flat) <= 0.05;
    return {ok, "uplift 2: mean mass_w=" + fmt(up) + " (> 0.24); no uplift: mean mass_w=" + fmt(flat) +
                    " vs active prior " + fmt(prior_flat)};
}

// ------------------------------------------------------------------ 8

Outcome planted_topics() {
    SyntheticSpec spec;
    spec.n_threads = 500;
    spec.seed = 1;
    const Corpus c = generate(spec);
    const ConceptLexicon lex = bundled_lexicon();
    const TopicConfig cfg;
    const auto windows = window_partition(c, WindowConfig::month());
    std::vector<std::vector<Topic>> per_window;
    for (const auto& w : windows) {
        per_window.push_back(topics_in_window(w, lex, cfg));
    }
    const auto streams = chain_streams(per_window, cfg.theta_h);
    const auto& pools = concept_pools();
    auto pool_of = [&](const std::string& unigram) {
        for (int p = 0; p < 2; ++p) {
            if (std::find(pools[p].begin(), pools[p].end(), unigram) != pools[p].end()) {
                return p;
            }
        }
        return -1;
    };
    std::set<int> stream_pools;
    bool pure = true;
    for (const auto& s : streams) {
        std::set<int> used;
        for (const auto& t : s.members) {
            for (const auto& [gram, freq] : t.concepts) {
                std::string text = gram;
                std::replace(text.begin(), text.end(), '_', ' ');
                for (const auto& unigram : extract_concepts(text, lex, 1)) {
                    used.insert(pool_of(unigram));
                }
            }
        }
        pure = pure && used.size() == 1 && *used.begin() >= 0;
        if (used.size() == 1) {
            stream_pools.insert(*used.begin());
        }
    }
    std::size_t topics = 0;
    for (const auto& w : per_window) {
        topics += w.size();
    }
    return {streams.size() == 2 && pure && stream_pools == std::set<int>{0, 1},
            std::to_string(streams.size()) + " streams over " + std::to_string(windows.size()) + " windows (" +
                std::to_string(topics) + " topics), single-pool: " + (pure ? "yes" : "no")};
}

// ------------------------------------------------------------------ 9

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'') {
            out += "'\\''";
        } else {
            out.push_back(ch);
        }
    }
    return out + "'";
}

Outcome end_to_end(const std::string& cli, const fs::path& fixture) {
    if (cli.empty() || !fs::exists(fixture / "threads.jsonl")) {
        return {false, "missing --cli or fixture"};
    }
    ScratchDir scratch;
    auto run_all = [&](const std::string& name, int jobs) {
        const fs::path out = scratch.path() / name;
        const std::string cmd = quote(cli) + " all --input " + quote((fixture / "threads.jsonl").string()) +
                                " --ratings " + quote((fixture / "ratings.jsonl").string()) + " --lexicon " +
                                quote((fixture / "lexicon.tsv").string()) + " --stopwords " +
                                quote((fixture / "stopwords.txt").string()) + " --seed 1 --jobs " +
                                std::to_string(jobs) + " --out " + quote(out.string()) + " > /dev/null 2>&1";
        const auto t0 = Clock::now();
        const int status = std::system(cmd.c_str());
        return std::make_pair(status, seconds_since(t0));
    };
    const auto [s1, t1] = run_all("run1", 1);
    const auto [s2, t2] = run_all("run2", 1);
    const auto [s3, t3] = run_all("jobs8", 8);
    const auto a = read_tree(scratch.path() / "run1");
    const bool same_runs = a == read_tree(scratch.path() / "run2");
    const bool same_jobs = a == read_tree(scratch.path() / "jobs8");
    const double slowest = std::max({t1, t2, t3});
    const bool ok = s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && same_runs && same_jobs && slowest < 10.0;
    return {ok, std::to_string(a.size()) + " files; repeat identical: " + (same_runs ? "yes" : "no") +
                    "; jobs 1 vs 8 identical: " + (same_jobs ? "yes" : "no") + "; slowest run " + fmt(slowest, 3) +
                    " s"};
}

// ----------------------------------------------------------------- 10

/// Full library pass over one corpus plus a file-level `all` run.
std::string degenerate_pass(const Corpus& c, const WindowConfig& window) {
    const ConceptLexicon lex = bundled_lexicon();
    const TopicConfig tcfg;
    const auto windows = window_partition(c, window);
    std::vector<std::vector<Topic>> per_window;
    for (const auto& w : windows) {
        const MultiplexTensor m = build_tensor(w);
        if (m.empowerment.stochastic_error() > 1e-9 || m.collaboration.stochastic_error() > 1e-9 ||
            m.credibility.stochastic_error() > 1e-9) {
            return "non-stochastic layer in window " + std::to_string(w.index);
        }
        const MultiplexRanks r = multiplex_pagerank(m);
        for (const RankVector* v : {&r.empowerment, &r.collaboration, &r.credibility, &r.leadership}) {
            if (!is_probability(v->scores)) {
                return "rank vector is not a distribution in window " + std::to_string(w.index);
            }
        }
        if (!is_probability(brokerage(layer_union(m)).scores)) {
            return "brokerage is not a distribution";
        }
        const HomophilyReport h = homophily(w);
        for (const auto& v : {h.p_ww, h.p_mm, h.prior_w, h.prior_m}) {
            if (v && (*v < 0.0 || *v > 1.0)) {
                return "rate out of range";
            }
        }
        const auto active = active_users(w);
        const std::size_t n_active = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
        if (n_active > 0) {
            top_mass(r.leadership, c.users, active, top_decile(n_active));
        }
        response_stats(w, GroupBy::author_role);
        per_window.push_back(topics_in_window(w, lex, tcfg));
    }
    chain_streams(per_window, tcfg.theta_h);

    ScratchDir scratch;
    {
        std::ofstream threads(scratch.path() / "threads.jsonl");
        write_thread_log(threads, c);
        std::ofstream ratings(scratch.path() / "ratings.jsonl");
        write_ratings(ratings, c);
        std::ofstream lexicon(scratch.path() / "lexicon.tsv");
        lexicon << bundled_lexicon_tsv();
    }
    PipelineConfig cfg;
    cfg.input = (scratch.path() / "threads.jsonl").string();
    cfg.ratings = (scratch.path() / "ratings.jsonl").string();
    cfg.lexicon = (scratch.path() / "lexicon.tsv").string();
    cfg.out = scratch.path() / "out";
    cfg.window = window;
    cfg.roles = {Role::manager};
    run(Subcommand::all, cfg);
    if (!fs::exists(cfg.out / "manifest.json")) {
        return "pipeline wrote no manifest";
    }
    return "";
}

Outcome degenerate_inputs() {
    std::vector<std::string> failures;
    auto attempt = [&](const std::string& name, const std::function<std::string()>& body) {
        try {
            const std::string problem = body();
            if (!problem.empty()) {
                failures.push_back(name + ": " + problem);
            }
        } catch (const std::exception& e) {
            failures.push_back(name + ": threw " + e.what());
        }
    };

    attempt("empty window", [] {
        // a gap week between two threads
        const Corpus c = build_corpus({thread("t1", woman("a"), 0, {comment("c1", man("b"), 60)}),
                                       thread("t2", man("b"), 15 * 86400, {comment("c2", woman("a"), 15 * 86400 + 60)})},
                                      {});
        const auto windows = window_partition(c, WindowConfig::week());
        if (windows.size() != 3 || !windows[1].empty()) {
            return std::string("expected an empty middle week");
        }
        const MultiplexTensor m = build_tensor(windows[1]);
        const MultiplexRanks r = multiplex_pagerank(m);
        for (double v : r.leadership.scores) {
            if (std::abs(v - 0.5) > 1e-12) {
                return std::string("empty window ranks are not uniform");
            }
        }
        const HomophilyReport h = homophily(windows[1]);
        if (h.p_ww || h.p_mm || h.prior_w) {
            return std::string("empty window reports a rate");
        }
        return degenerate_pass(c, WindowConfig::week());
    });

    attempt("ratings-free corpus", [] {
        SyntheticSpec spec;
        spec.n_threads = 80;
        spec.n_users = 30;
        spec.like_rate = 0.0;
        spec.dislike_rate = 0.0;
        spec.seed = 10;
        const Corpus c = generate(spec);
        if (!c.ratings.empty()) {
            return std::string("generator produced ratings");
        }
        const MultiplexTensor m = build_tensor(whole_corpus(c));
        if (!m.credibility.empty()) {
            return std::string("credibility layer should be empty");
        }
        return degenerate_pass(c, WindowConfig::month());
    });

    attempt("single-user corpus", [] {
        const Corpus c = build_corpus({thread("t1", woman("solo", Role::manager), 0,
                                              {comment("c1", woman("solo", Role::manager), 30, "self reply")},
                                              "carta di credito", "pagamenti online")},
                                      {rating(woman("solo", Role::manager), "t1", 1)});
        const MultiplexRanks r = multiplex_pagerank(build_tensor(whole_corpus(c)));
        if (r.leadership.scores != std::vector<double>{1.0}) {
            return std::string("single user must hold all rank");
        }
        return degenerate_pass(c, WindowConfig::month());
    });

    attempt("all-dislike rater", [] {
        const Corpus c = build_corpus(
            {thread("t1", woman("a"), 0, {comment("c1", man("b"), 60)}), thread("t2", man("c"), 100)},
            {rating(man("r"), "t1", -1), rating(man("r"), "c1", -1), rating(man("r"), "t2", -1)});
        const MultiplexTensor m = build_tensor(whole_corpus(c));
        const std::size_t r = *c.user_index("r");
        std::vector<double> row;
        for (const Edge& e : m.credibility.edges()) {
            if (e.src == r) {
                row.push_back(e.weight);
            }
        }
        if (row.size() != 3) {
            return std::string("all-dislike rater should spread trust over its 3 targets");
        }
        for (double w : row) {
            if (std::abs(w - 1.0 / 3.0) > 1e-15) {
                return std::string("all-dislike row is not uniform");
            }
        }
        return degenerate_pass(c, WindowConfig::month());
    });

    std::string detail = failures.empty() ? "empty window, ratings-free, single-user, all-dislike rater: all valid"
                                          : failures.front();
    for (std::size_t i = 1; i < failures.size(); ++i) {
        detail += "; " + failures[i];
    }
    return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    fs::path fixture;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") {
            cli = argv[i + 1];
        } else if (flag == "--fixture") {
            fixture = argv[i + 1];
        } else {
            std::cerr << "unknown flag " << flag << "\n";
            return 2;
        }
    }

    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"stochasticity", stochasticity},
        {"monoplex reduction", monoplex_reduction},
        {"pagerank oracle", pagerank_oracle_match},
        {"layer-chained fixed-point oracle", eq5_oracle},
        {"clique oracle", clique_oracle},
        {"homophily recovery", homophily_recovery},
        {"leadership uplift", leadership_uplift},
        {"planted topics", planted_topics},
        {"end-to-end determinism", [&] { return end_to_end(cli, fixture); }},
        {"degenerate inputs", degenerate_inputs},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].name << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}

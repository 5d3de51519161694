#include "leadnet/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leadnet/analytics.hpp"
#include "leadnet/digest.hpp"
#include "leadnet/export.hpp"
#include "leadnet/multiplex.hpp"
#include "leadnet/parallel.hpp"
#include "leadnet/time.hpp"

namespace leadnet {

namespace fs = std::filesystem;

namespace {

using ojson = nlohmann::ordered_json;

/// Files written by one run; removed again unless the run commits.
class OutputSet {
public:
    explicit OutputSet(fs::path root) : root_(std::move(root)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) {
            return;
        }
        std::error_code ec;
        for (auto it = written_.rbegin(); it != written_.rend(); ++it) {
            fs::remove(root_ / *it, ec);
        }
        for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) {
            if (fs::is_empty(*it, ec)) {
                fs::remove(*it, ec);
            }
        }
    }

    void write(const fs::path& relative, const std::string& content) {
        const fs::path full = root_ / relative;
        make_dirs(full.parent_path());
        std::ofstream out(full, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write '" + full.string() + "'");
        }
        written_.push_back(relative);
        out << content;
        out.close();
        if (!out) {
            throw IoError("write failed for '" + full.string() + "'");
        }
    }

    const std::vector<fs::path>& written() const { return written_; }
    const fs::path& root() const { return root_; }
    void commit() { committed_ = true; }

private:
    void make_dirs(const fs::path& dir) {
        if (dir.empty() || fs::exists(dir)) {
            return;
        }
        make_dirs(dir.parent_path());
        std::error_code ec;
        if (!fs::create_directory(dir, ec) && !fs::exists(dir)) {
            throw IoError("cannot create directory '" + dir.string() + "'");
        }
        created_dirs_.push_back(dir);
    }

    fs::path root_;
    std::vector<fs::path> written_;
    std::vector<fs::path> created_dirs_;
    bool committed_ = false;
};

std::string window_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "window_%04zu", index);
    return buf;
}

struct WindowAnalysis {
    MultiplexTensor tensor;
    MultiplexRanks ranks;
    RankVector broker;
};

WindowAnalysis analyze(const WindowSlice& slice, const MprParams& params) {
    WindowAnalysis a;
    a.tensor = build_tensor(slice);
    a.ranks = multiplex_pagerank(a.tensor, params);
    a.broker = brokerage(layer_union(a.tensor));
    return a;
}

class Runner {
public:
    Runner(const PipelineConfig& cfg, OutputSet& outputs, RunReport& report)
        : cfg_(cfg), outputs_(outputs), report_(report) {}

    void load() {
        if (cfg_.input.empty()) {
            throw ContractViolation("--input is required");
        }
        auto threads = read_thread_log(cfg_.input, cfg_.format);
        add_diagnostics(cfg_.input, threads.diagnostics);
        ParseResult<RatingEvent> ratings;
        if (!cfg_.ratings.empty()) {
            ratings = read_ratings(cfg_.ratings);
            add_diagnostics(cfg_.ratings, ratings.diagnostics);
        }
        corpus_ = build_corpus(std::move(threads.records), std::move(ratings.records));
        add_diagnostics("corpus", corpus_.diagnostics);
        slices_ = window_partition(corpus_, cfg_.window);
        inputs_.push_back(cfg_.input);
        if (!cfg_.ratings.empty()) {
            inputs_.push_back(cfg_.ratings);
        }
    }

    void ingest() {
        std::ostringstream threads, ratings;
        write_thread_log(threads, corpus_);
        write_ratings(ratings, corpus_);
        outputs_.write("threads.normalized.jsonl", threads.str());
        outputs_.write("ratings.normalized.jsonl", ratings.str());
    }

    void rank() {
        ensure_analysis();
        for (std::size_t w = 0; w < slices_.size(); ++w) {
            std::ostringstream out;
            write_rankings(out, corpus_.users, analyses_[w].ranks, analyses_[w].broker);
            outputs_.write(fs::path("rankings") / (window_name(w) + ".csv"), out.str());
        }
        std::ostringstream out;
        write_rankings(out, corpus_.users, whole_->ranks, whole_->broker);
        outputs_.write(fs::path("rankings") / "corpus.csv", out.str());
    }

    void topics() {
        ensure_topics();
        std::ostringstream out;
        write_topics_json(out, streams_);
        outputs_.write("topics.json", out.str());
    }

    void analytics() {
        ensure_analysis();
        std::vector<MetricRow> rows;
        for (std::size_t w = 0; w < slices_.size(); ++w) {
            const WindowSlice& slice = slices_[w];
            const Timestamp start = slice.start;
            const HomophilyReport h = homophily(slice);
            rows.push_back({start, "p_ww", "female", h.p_ww, h.w_total});
            rows.push_back({start, "p_mm", "male", h.p_mm, h.m_total});
            rows.push_back({start, "prior_author", "female", h.prior_w, h.threads_known});

            const std::vector<bool> active = active_users(slice);
            const auto n_active = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
            if (n_active > 0) {
                const std::size_t k = cfg_.top_k.value_or(top_decile(n_active));
                std::vector<Diagnostic> diags;
                const TopMassEntry lead = top_mass(analyses_[w].ranks.leadership, corpus_.users, active, k, &diags);
                const TopMassEntry brok = top_mass(analyses_[w].broker, corpus_.users, active, k, &diags);
                add_diagnostics(window_name(w), diags);
                rows.push_back({start, "top_mass_leadership", "female", lead.mass_w, lead.k});
                rows.push_back({start, "top_mass_brokerage", "female", brok.mass_w, brok.k});
                rows.push_back({start, "prior_active", "female", lead.prior_w, n_active});
            } else {
                rows.push_back({start, "top_mass_leadership", "female", std::nullopt, 0});
                rows.push_back({start, "top_mass_brokerage", "female", std::nullopt, 0});
                rows.push_back({start, "prior_active", "female", std::nullopt, 0});
            }
            for (auto [group_by, prefix] : {std::pair{GroupBy::author_role, "role:"},
                                            std::pair{GroupBy::author_gender, "gender:"}}) {
                for (const ResponseRow& r : response_stats(slice, group_by)) {
                    const std::string group = prefix + r.group;
                    rows.push_back({start, "reply_latency_s", group, r.mean_latency_seconds, r.thread_count});
                    rows.push_back({start, "comments_per_thread", group,
                                    static_cast<double>(r.comment_count) / static_cast<double>(r.thread_count),
                                    r.comment_count});
                }
            }
        }
        std::ostringstream out;
        write_metrics_csv(out, rows);
        outputs_.write("analytics.csv", out.str());
    }

    void export_graph() {
        ensure_analysis();
        for (std::size_t w = 0; w < slices_.size(); ++w) {
            write_graph(fs::path("graphs") / window_name(w), analyses_[w].tensor);
        }
        write_graph(fs::path("graphs") / "corpus", whole_->tensor);
        if (cfg_.topic_id) {
            ensure_topics();
            const Topic* found = nullptr;
            for (const auto& s : streams_) {
                for (const auto& t : s.members) {
                    if (t.topic_id == *cfg_.topic_id) {
                        found = &t;
                    }
                }
            }
            if (found == nullptr) {
                throw ContractViolation("unknown topic id '" + *cfg_.topic_id + "'");
            }
            const WindowSlice sub = topic_network(*found, slices_[found->window], *lexicon_, cfg_.topics.max_ngram);
            write_graph(fs::path("graphs") / ("topic_" + found->topic_id), build_tensor(sub));
        }
    }

    void synth() {
        SyntheticSpec spec = cfg_.synth;
        spec.seed = cfg_.seed;
        const Corpus corpus = generate(spec);
        std::ostringstream threads, ratings;
        write_thread_log(threads, corpus);
        write_ratings(ratings, corpus);
        outputs_.write("threads.jsonl", threads.str());
        outputs_.write("ratings.jsonl", ratings.str());
        outputs_.write("lexicon.tsv", bundled_lexicon_tsv());
        outputs_.write("stopwords.txt", bundled_stopwords());
    }

    void finish(Subcommand cmd) {
        if (cmd != Subcommand::synth) {
            std::string text;
            for (const auto& d : report_.diagnostics) {
                text += to_string(d) + '\n';
            }
            outputs_.write("diagnostics.txt", text);
        }
        outputs_.write("manifest.json", manifest(cmd).dump(2) + "\n");
    }

private:
    void add_diagnostics(const std::string& source, const std::vector<Diagnostic>& diags) {
        for (const auto& d : diags) {
            report_.diagnostics.push_back({d.line, source + ": " + d.message});
        }
    }

    void ensure_analysis() {
        if (whole_) {
            return;
        }
        analyses_.resize(slices_.size());
        parallel_for(slices_.size(), cfg_.jobs, [&](std::size_t w) { analyses_[w] = analyze(slices_[w], cfg_.mpr); });
        whole_ = analyze(whole_corpus(corpus_), cfg_.mpr);
    }

    void ensure_lexicon() {
        if (lexicon_) {
            return;
        }
        if (cfg_.lexicon.empty()) {
            throw ContractViolation("topic extraction needs --lexicon");
        }
        std::vector<Diagnostic> diags;
        lexicon_ = ConceptLexicon::from_files(cfg_.lexicon, cfg_.stopwords, &diags);
        add_diagnostics(cfg_.lexicon, diags);
        inputs_.push_back(cfg_.lexicon);
        if (!cfg_.stopwords.empty()) {
            inputs_.push_back(cfg_.stopwords);
        }
    }

    void ensure_topics() {
        if (topics_done_) {
            return;
        }
        ensure_lexicon();
        cfg_.topics.validate();
        std::vector<std::vector<Topic>> per_window(slices_.size());
        parallel_for(slices_.size(), cfg_.jobs,
                     [&](std::size_t w) { per_window[w] = topics_in_window(slices_[w], *lexicon_, cfg_.topics); });
        streams_ = chain_streams(per_window, cfg_.topics.theta_h);
        topics_done_ = true;
    }

    void write_graph(const fs::path& stem, const MultiplexTensor& tensor) {
        std::ostringstream edges;
        write_edge_list(edges, tensor, corpus_.users);
        outputs_.write(fs::path(stem.string() + ".edges.csv"), edges.str());

        const UndirectedGraph g = layer_union(tensor);
        std::vector<std::size_t> all(corpus_.n_users());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        const auto pairs = g.edges();
        std::ostringstream dot;
        write_dot(dot, corpus_.users, all, pairs, stem.filename().string());
        outputs_.write(fs::path(stem.string() + ".dot"), dot.str());

        if (!cfg_.roles.empty()) {
            std::vector<Diagnostic> diags;
            const RoleSubgraph sub = role_subgraph(g, corpus_.users, cfg_.roles, &diags);
            add_diagnostics(stem.filename().string(), diags);
            std::ostringstream rdot;
            write_dot(rdot, corpus_.users, sub.nodes, sub.edges, stem.filename().string() + "_roles");
            outputs_.write(fs::path(stem.string() + ".roles.dot"), rdot.str());
        }
    }

    ojson manifest(Subcommand cmd) const {
        ojson m;
        m["tool"] = "leadnet";
        m["version"] = std::string(tool_version);
        m["command"] = std::string(to_string(cmd));

        ojson c;
        c["input"] = cfg_.input;
        c["ratings"] = cfg_.ratings;
        c["lexicon"] = cfg_.lexicon;
        c["stopwords"] = cfg_.stopwords;
        c["format"] = cfg_.format ? (*cfg_.format == LogFormat::csv ? "csv" : "jsonl") : "auto";
        c["window"] = cfg_.window.to_string();
        c["window_origin"] = cfg_.window.origin ? ojson(format_timestamp(*cfg_.window.origin)) : ojson(nullptr);
        c["alpha"] = cfg_.mpr.alpha;
        c["beta"] = cfg_.mpr.beta;
        c["gamma"] = cfg_.mpr.gamma;
        c["layer_order"] = ojson::array();
        for (LayerKind k : cfg_.mpr.layer_order) {
            c["layer_order"].push_back(std::string(to_string(k)));
        }
        c["tol"] = cfg_.mpr.tol;
        c["max_iter"] = cfg_.mpr.max_iter;
        c["epsilon_floor"] = cfg_.mpr.epsilon_floor;
        c["min_freq"] = cfg_.topics.min_freq;
        c["theta_v"] = cfg_.topics.theta_v;
        c["theta_h"] = cfg_.topics.theta_h;
        c["max_ngram"] = cfg_.topics.max_ngram;
        c["top_k"] = cfg_.top_k ? ojson(*cfg_.top_k) : ojson("decile");
        c["roles"] = ojson::array();
        for (Role r : cfg_.roles) {
            c["roles"].push_back(std::string(to_string(r)));
        }
        c["topic"] = cfg_.topic_id ? ojson(*cfg_.topic_id) : ojson(nullptr);
        c["seed"] = cfg_.seed;
        if (cmd == Subcommand::synth) {
            const SyntheticSpec& s = cfg_.synth;
            ojson sj;
            sj["n_users"] = s.n_users;
            sj["n_threads"] = s.n_threads;
            sj["gender_prior_w"] = s.gender_prior_w;
            sj["mean_comments"] = s.mean_comments;
            sj["homophily_p_ww"] = s.homophily_p_ww ? ojson(*s.homophily_p_ww) : ojson(nullptr);
            sj["manager_latency_factor"] = s.manager_latency_factor;
            sj["women_activity_uplift"] = s.women_activity_uplift;
            sj["like_rate"] = s.like_rate;
            sj["dislike_rate"] = s.dislike_rate;
            sj["span_days"] = s.span_days;
            c["synth"] = std::move(sj);
        }
        m["config"] = std::move(c);

        m["inputs"] = ojson::array();
        for (const auto& path : inputs_) {
            ojson in;
            in["path"] = path;
            in["sha256"] = sha256_file(path);
            m["inputs"].push_back(std::move(in));
        }
        std::vector<fs::path> outs = outputs_.written();
        std::sort(outs.begin(), outs.end());
        m["outputs"] = ojson::array();
        for (const auto& rel : outs) {
            ojson o;
            o["path"] = rel.generic_string();
            o["sha256"] = sha256_file((outputs_.root() / rel).string());
            m["outputs"].push_back(std::move(o));
        }
        m["diagnostic_count"] = report_.diagnostics.size();
        return m;
    }

    const PipelineConfig& cfg_;
    OutputSet& outputs_;
    RunReport& report_;

    Corpus corpus_;
    std::vector<WindowSlice> slices_;
    std::vector<WindowAnalysis> analyses_;
    std::optional<WindowAnalysis> whole_;
    std::optional<ConceptLexicon> lexicon_;
    std::vector<TopicStream> streams_;
    bool topics_done_ = false;
    std::vector<std::string> inputs_;
};

}  // namespace

std::string_view to_string(Subcommand cmd) {
    switch (cmd) {
        case Subcommand::ingest: return "ingest";
        case Subcommand::rank: return "rank";
        case Subcommand::topics: return "topics";
        case Subcommand::analytics: return "analytics";
        case Subcommand::export_graph: return "export-graph";
        case Subcommand::synth: return "synth";
        case Subcommand::all: break;
    }
    return "all";
}

Subcommand parse_subcommand(std::string_view text) {
    for (Subcommand c : {Subcommand::ingest, Subcommand::rank, Subcommand::topics, Subcommand::analytics,
                         Subcommand::export_graph, Subcommand::synth, Subcommand::all}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    throw ContractViolation("unknown subcommand '" + std::string(text) + "'");
}

RunReport run(Subcommand cmd, const PipelineConfig& cfg) {
    if (cfg.out.empty()) {
        throw ContractViolation("--out is required");
    }
    cfg.mpr.validate();
    cfg.topics.validate();

    RunReport report;
    OutputSet outputs(cfg.out);
    Runner runner(cfg, outputs, report);

    if (cmd == Subcommand::synth) {
        runner.synth();
    } else {
        runner.load();
        switch (cmd) {
            case Subcommand::ingest: runner.ingest(); break;
            case Subcommand::rank: runner.rank(); break;
            case Subcommand::topics: runner.topics(); break;
            case Subcommand::analytics: runner.analytics(); break;
            case Subcommand::export_graph: runner.export_graph(); break;
            case Subcommand::all:
                runner.ingest();
                runner.rank();
                runner.topics();
                runner.analytics();
                runner.export_graph();
                break;
            case Subcommand::synth: break;
        }
    }
    runner.finish(cmd);
    report.outputs = outputs.written();
    outputs.commit();
    return report;
}

}  // namespace leadnet

#include <array>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leadnet/multiplex.hpp"
#include "leadnet/pipeline.hpp"

namespace {

using namespace leadnet;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::array<double, 3> parse_alpha(const std::string& text) {
    const auto parts = split_list(text);
    std::array<double, 3> alpha{};
    if (parts.size() == 1) {
        alpha.fill(std::stod(parts[0]));
    } else if (parts.size() == 3) {
        for (std::size_t i = 0; i < 3; ++i) {
            alpha[i] = std::stod(parts[i]);
        }
    } else {
        throw ContractViolation("--alpha takes one value or three comma-separated values");
    }
    return alpha;
}

LayerKind parse_layer_token(const std::string& token) {
    if (token == "E" || token == "e") return LayerKind::empowerment;
    if (token == "C" || token == "c") return LayerKind::collaboration;
    if (token == "T" || token == "t") return LayerKind::credibility;
    return parse_layer_kind(token);
}

std::array<LayerKind, 3> parse_layer_order(const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) {
        throw ContractViolation("--layer-order takes three comma-separated layers");
    }
    return {parse_layer_token(parts[0]), parse_layer_token(parts[1]), parse_layer_token(parts[2])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leadership, topic and gender analytics for enterprise thread logs", "leadnet"};
    app.set_version_flag("--version", std::string(tool_version));
    app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags win)");
    app.require_subcommand(1, 1);

    PipelineConfig cfg;
    std::string window = "month";
    std::string alpha;
    std::string layer_order;
    std::string format;
    std::vector<std::string> roles;
    std::string topic;
    std::size_t top_k = 0;
    std::optional<double> homophily;
    std::string out;

    auto env = [](const char* name) { return std::string("LEADNET_") + name; };

    app.add_option("--input", cfg.input, "Thread log (JSONL or CSV)")->envname(env("INPUT"));
    app.add_option("--ratings", cfg.ratings, "Ratings log (JSONL)")->envname(env("RATINGS"));
    app.add_option("--lexicon", cfg.lexicon, "Concept lexicon TSV")->envname(env("LEXICON"));
    app.add_option("--stopwords", cfg.stopwords, "Stopword list")->envname(env("STOPWORDS"));
    app.add_option("--out", out, "Output directory")->envname(env("OUT"));
    app.add_option("--format", format, "Thread log format; inferred from the extension when unset")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->envname(env("FORMAT"));
    app.add_option("--window", window, "week, month or days:N")->envname(env("WINDOW"));
    app.add_option("--alpha", alpha, "Damping, one value or three by layer position")->envname(env("ALPHA"));
    app.add_option("--beta", cfg.mpr.beta, "Walk bias exponent")->envname(env("BETA"));
    app.add_option("--gamma", cfg.mpr.gamma, "Teleport bias exponent")->envname(env("GAMMA"));
    app.add_option("--layer-order", layer_order, "Layer processing order, e.g. E,C,T")->envname(env("LAYER_ORDER"));
    app.add_option("--tol", cfg.mpr.tol, "L1 convergence tolerance")->envname(env("TOL"));
    app.add_option("--max-iter", cfg.mpr.max_iter, "Iteration cap per layer")->envname(env("MAX_ITER"));
    app.add_option("--min-freq", cfg.topics.min_freq, "Minimum n-gram frequency per window")->envname(env("MIN_FREQ"));
    app.add_option("--theta-v", cfg.topics.theta_v, "Within-window merge threshold")->envname(env("THETA_V"));
    app.add_option("--theta-h", cfg.topics.theta_h, "Cross-window chaining threshold")->envname(env("THETA_H"));
    app.add_option("--top-k", top_k, "Top-set size for rank mass (default: top decile)")->envname(env("TOP_K"));
    app.add_option("--role", roles, "Role filter for exported subgraphs")->delimiter(',')->envname(env("ROLE"));
    app.add_option("--topic", topic, "Restrict exported graphs to one topic id")->envname(env("TOPIC"));
    app.add_option("--seed", cfg.seed, "Generator seed")->envname(env("SEED"));
    app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->envname(env("JOBS"));

    auto& s = cfg.synth;
    app.add_option("--n-users", s.n_users, "synth: number of users")->envname(env("N_USERS"));
    app.add_option("--n-threads", s.n_threads, "synth: number of threads")->envname(env("N_THREADS"));
    app.add_option("--prior", s.gender_prior_w, "synth: share of women among users")->envname(env("PRIOR"));
    app.add_option("--mean-comments", s.mean_comments, "synth: mean comments per thread")
        ->envname(env("MEAN_COMMENTS"));
    app.add_option("--homophily", homophily, "synth: P(woman comments | woman authored)")->envname(env("HOMOPHILY"));
    app.add_option("--uplift", s.women_activity_uplift, "synth: women's thread-authoring rate multiplier")
        ->envname(env("UPLIFT"));
    app.add_option("--manager-latency", s.manager_latency_factor, "synth: reply delay factor on manager threads")
        ->envname(env("MANAGER_LATENCY"));
    app.add_option("--like-rate", s.like_rate, "synth: like probability per message")->envname(env("LIKE_RATE"));
    app.add_option("--dislike-rate", s.dislike_rate, "synth: dislike probability per message")
        ->envname(env("DISLIKE_RATE"));
    app.add_option("--span-days", s.span_days, "synth: days covered by publications")->envname(env("SPAN_DAYS"));

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"ingest", "Validate and normalize thread and rating logs"},
        {"rank", "Per-window multiplex ranks to CSV"},
        {"topics", "Topics and topic streams to JSON"},
        {"analytics", "Homophily, top-rank mass and response statistics to CSV"},
        {"export-graph", "DOT and edge-list exports"},
        {"synth", "Generate a synthetic corpus with planted parameters"},
        {"all", "ingest, rank, topics, analytics and export-graph"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; usage errors share the contract-violation code
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const Subcommand cmd = parse_subcommand(app.get_subcommands().front()->get_name());
        cfg.out = out;
        cfg.window = WindowConfig::parse(window);
        if (!alpha.empty()) {
            cfg.mpr.alpha = parse_alpha(alpha);
        }
        if (!layer_order.empty()) {
            cfg.mpr.layer_order = parse_layer_order(layer_order);
        }
        if (!format.empty()) {
            cfg.format = format == "csv" ? LogFormat::csv : LogFormat::jsonl;
        }
        if (app.count("--top-k") > 0) {
            cfg.top_k = top_k;
        }
        for (const auto& r : roles) {
            const Role role = parse_role(r);
            if (role == Role::unknown) {
                throw ContractViolation("unknown role '" + r + "'");
            }
            cfg.roles.insert(role);
        }
        if (!topic.empty()) {
            cfg.topic_id = topic;
        }
        cfg.synth.homophily_p_ww = homophily;
        if (cmd == Subcommand::synth) {
            cfg.synth.validate();
        }

        const RunReport report = run(cmd, cfg);
        if (!report.diagnostics.empty()) {
            std::cerr << report.diagnostics.size() << " diagnostic(s), see " << (cfg.out / "diagnostics.txt").string()
                      << '\n';
        }
        return 0;
    } catch (const ContractViolation& e) {
        std::cerr << "leadnet: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "leadnet: " << e.what() << '\n';
        return 1;
    }
}

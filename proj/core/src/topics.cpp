#include "leadnet/topics.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <tuple>

namespace leadnet {

namespace {

bool is_separator(unsigned char c) {
    return c < 0x80 && (std::isspace(c) || std::ispunct(c) || std::iscntrl(c));
}

std::string join_tokens(std::span<const std::string> tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) {
            out.push_back('_');
        }
        out += t;
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find('\t', start);
        cols.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    for (auto& c : cols) {
        while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.pop_back();
        while (!c.empty() && c.front() == ' ') c.erase(c.begin());
    }
    return cols;
}

/// Fixed-width bitset sized at runtime.
class Bits {
public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool none() const {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }
    Bits operator&(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
        return r;
    }
    Bits operator|(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
        return r;
    }
    Bits minus(const Bits& o) const {
        Bits r = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
        return r;
    }
    std::size_t count_and(const Bits& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

class CliqueSearch {
public:
    explicit CliqueSearch(const UndirectedGraph& g) : neighbours_(g.n(), Bits(g.n())) {
        for (std::size_t v = 0; v < g.n(); ++v) {
            for (std::size_t u : g.adjacency[v]) {
                neighbours_[v].set(u);
            }
        }
    }

    std::vector<std::vector<std::size_t>> run() {
        const std::size_t n = neighbours_.size();
        Bits all(n);
        for (std::size_t v = 0; v < n; ++v) {
            all.set(v);
        }
        std::vector<std::size_t> r;
        expand(r, all, Bits(n));
        for (auto& c : cliques_) {
            std::sort(c.begin(), c.end());
        }
        std::sort(cliques_.begin(), cliques_.end());
        return std::move(cliques_);
    }

private:
    void expand(std::vector<std::size_t>& r, Bits p, Bits x) {
        if (p.none()) {
            if (x.none() && r.size() >= 2) {
                cliques_.push_back(r);
            }
            return;
        }
        // Tomita pivot: the vertex of P u X with most neighbours in P.
        std::size_t pivot = 0;
        std::size_t best = 0;
        bool have_pivot = false;
        (p | x).for_each([&](std::size_t u) {
            const std::size_t c = p.count_and(neighbours_[u]);
            if (!have_pivot || c > best) {
                pivot = u;
                best = c;
                have_pivot = true;
            }
        });
        const Bits candidates = p.minus(neighbours_[pivot]);
        candidates.for_each([&](std::size_t v) {
            r.push_back(v);
            expand(r, p & neighbours_[v], x & neighbours_[v]);
            r.pop_back();
            p.reset(v);
            x.set(v);
        });
    }

    std::vector<Bits> neighbours_;
    std::vector<std::vector<std::size_t>> cliques_;
};

double norm(const Topic& t) {
    double s = 0.0;
    for (const auto& [_, f] : t.concepts) {
        s += static_cast<double>(f) * static_cast<double>(f);
    }
    return std::sqrt(s);
}

Topic merge_pair(const Topic& a, const Topic& b) {
    Topic out = a;
    for (const auto& [ngram, freq] : b.concepts) {
        auto& slot = out.concepts[ngram];
        slot = std::max(slot, freq);
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_separator(c)) {
            if (!cur.empty()) {
                tokens.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
        }
    }
    if (!cur.empty()) {
        tokens.push_back(std::move(cur));
    }
    return tokens;
}

void ConceptLexicon::add_entry(std::string_view surface, std::string_view concept_id, std::string_view /*language*/) {
    std::vector<std::string> tokens = tokenize(surface);
    if (tokens.empty() || concept_id.empty()) {
        throw ContractViolation("lexicon entries need a surface form and a concept id");
    }
    const std::string id(concept_id);
    longest_ = std::max(longest_, tokens.size());
    display_.emplace(id, join_tokens(tokens));
    auto [it, inserted] = entries_.emplace(std::move(tokens), id);
    if (!inserted && id < it->second) {
        it->second = id;
    }
}

void ConceptLexicon::add_stopword(std::string_view token, std::string_view language) {
    for (auto& t : tokenize(token)) {
        stop_by_lang_[std::string(language)].insert(t);
        stopwords_.insert(std::move(t));
    }
}

std::vector<Diagnostic> ConceptLexicon::read_tsv(std::istream& in) {
    std::vector<Diagnostic> diags;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") {
            continue;
        }
        const auto cols = split_tabs(line);
        if (cols.size() < 2 || cols[0].empty() || cols[1].empty() || tokenize(cols[0]).empty()) {
            diags.push_back({line_no, "malformed lexicon entry"});
            continue;
        }
        add_entry(cols[0], cols[1], cols.size() > 2 ? cols[2] : "");
    }
    if (in.bad()) {
        throw IoError("lexicon stream could not be read");
    }
    return diags;
}

std::vector<Diagnostic> ConceptLexicon::read_stopwords(std::istream& in) {
    std::vector<Diagnostic> diags;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") {
            continue;
        }
        const auto cols = split_tabs(line);
        if (cols[0].empty()) {
            diags.push_back({line_no, "empty stopword"});
            continue;
        }
        add_stopword(cols[0], cols.size() > 1 ? cols[1] : "");
    }
    if (in.bad()) {
        throw IoError("stopword stream could not be read");
    }
    return diags;
}

ConceptLexicon ConceptLexicon::from_files(const std::string& lexicon_path, const std::string& stopwords_path,
                                          std::vector<Diagnostic>* diagnostics) {
    ConceptLexicon lex;
    std::ifstream lin(lexicon_path);
    if (!lin) {
        throw IoError("cannot open lexicon '" + lexicon_path + "'");
    }
    auto d1 = lex.read_tsv(lin);
    std::vector<Diagnostic> d2;
    if (!stopwords_path.empty()) {
        std::ifstream sin(stopwords_path);
        if (!sin) {
            throw IoError("cannot open stopword file '" + stopwords_path + "'");
        }
        d2 = lex.read_stopwords(sin);
    }
    if (diagnostics != nullptr) {
        diagnostics->insert(diagnostics->end(), d1.begin(), d1.end());
        diagnostics->insert(diagnostics->end(), d2.begin(), d2.end());
    }
    return lex;
}

bool ConceptLexicon::is_stopword(std::string_view token) const {
    return stopwords_.find(token) != stopwords_.end();
}

std::pair<std::size_t, const std::string*> ConceptLexicon::match(std::span<const std::string> tokens,
                                                                 std::size_t pos) const {
    const std::size_t max_len = std::min(longest_, tokens.size() - pos);
    std::vector<std::string> key;
    for (std::size_t len = max_len; len >= 1; --len) {
        key.assign(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                   tokens.begin() + static_cast<std::ptrdiff_t>(pos + len));
        if (auto it = entries_.find(key); it != entries_.end()) {
            return {len, &it->second};
        }
    }
    return {0, nullptr};
}

const std::string& ConceptLexicon::display_name(const std::string& concept_id) const {
    auto it = display_.find(concept_id);
    if (it == display_.end()) {
        throw ContractViolation("unknown concept id '" + concept_id + "'");
    }
    return it->second;
}

std::vector<std::string> extract_concepts(std::string_view text, const ConceptLexicon& lexicon, std::size_t max_ngram) {
    if (max_ngram < 1) {
        throw ContractViolation("max_ngram must be >= 1");
    }
    const std::vector<std::string> tokens = tokenize(text);

    struct RunConcept {
        std::string surface;              // joined surface tokens
        std::vector<std::string> gap;     // stopwords between the previous concept and this one
        const std::string* concept_id;
    };
    std::vector<std::string> out;
    std::vector<RunConcept> run;
    std::vector<std::string> pending_stops;

    auto flush = [&] {
        for (std::size_t begin = 0; begin < run.size(); begin += max_ngram) {
            const std::size_t end = std::min(run.size(), begin + max_ngram);
            if (end - begin >= 2) {
                std::string gram = run[begin].surface;
                for (std::size_t i = begin + 1; i < end; ++i) {
                    for (const auto& s : run[i].gap) {
                        gram += "_" + s;
                    }
                    gram += "_" + run[i].surface;
                }
                out.push_back(std::move(gram));
            }
        }
        for (const auto& c : run) {
            out.push_back(lexicon.display_name(*c.concept_id));
        }
        run.clear();
        pending_stops.clear();
    };

    std::size_t pos = 0;
    while (pos < tokens.size()) {
        auto [len, concept_id] = lexicon.match(tokens, pos);
        if (len > 0) {
            RunConcept c{join_tokens(std::span<const std::string>(tokens).subspan(pos, len)),
                         run.empty() ? std::vector<std::string>{} : std::move(pending_stops), concept_id};
            pending_stops.clear();
            run.push_back(std::move(c));
            pos += len;
        } else if (lexicon.is_stopword(tokens[pos])) {
            if (!run.empty()) {
                pending_stops.push_back(tokens[pos]);
            }
            ++pos;
        } else {
            flush();
            ++pos;
        }
    }
    flush();
    return out;
}

std::vector<std::string> thread_ngrams(const ThreadRecord& thread, const ConceptLexicon& lexicon,
                                       std::size_t max_ngram) {
    std::vector<std::string> out = extract_concepts(thread.title, lexicon, max_ngram);
    auto append = [&](const std::string& text) {
        auto more = extract_concepts(text, lexicon, max_ngram);
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    append(thread.description);
    for (const auto& c : thread.comments) {
        append(c.text);
    }
    return out;
}

void TopicConfig::validate() const {
    if (min_freq < 1) {
        throw ContractViolation("min_freq must be >= 1");
    }
    if (!(theta_v >= 0.0 && theta_v <= 1.0) || !(theta_h >= 0.0 && theta_h <= 1.0)) {
        throw ContractViolation("topic thresholds must lie in [0, 1]");
    }
    if (max_ngram < 1) {
        throw ContractViolation("max_ngram must be >= 1");
    }
}

ConceptGraph cooccurrence_graph(std::span<const std::vector<std::string>> per_thread_ngrams, std::size_t min_freq) {
    std::map<std::string, std::size_t> freq;
    for (const auto& grams : per_thread_ngrams) {
        for (const auto& g : grams) {
            ++freq[g];
        }
    }
    ConceptGraph cg;
    std::map<std::string, std::size_t> index;
    for (const auto& [g, f] : freq) {
        if (f >= min_freq) {
            index.emplace(g, cg.vertices.size());
            cg.vertices.push_back(g);
            cg.frequency.push_back(f);
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& grams : per_thread_ngrams) {
        std::set<std::size_t> present;
        for (const auto& g : grams) {
            if (auto it = index.find(g); it != index.end()) {
                present.insert(it->second);
            }
        }
        for (auto a = present.begin(); a != present.end(); ++a) {
            for (auto b = std::next(a); b != present.end(); ++b) {
                edges.emplace_back(*a, *b);
            }
        }
    }
    cg.graph = UndirectedGraph::from_edges(cg.vertices.size(), edges);
    return cg;
}

std::vector<std::vector<std::size_t>> bron_kerbosch(const UndirectedGraph& graph) {
    return CliqueSearch(graph).run();
}

double cosine(const Topic& a, const Topic& b) {
    if (a.concepts.empty() || b.concepts.empty()) {
        return 0.0;
    }
    double dot = 0.0;
    auto ia = a.concepts.begin();
    auto ib = b.concepts.begin();
    while (ia != a.concepts.end() && ib != b.concepts.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += static_cast<double>(ia->second) * static_cast<double>(ib->second);
            ++ia;
            ++ib;
        }
    }
    const double c = dot / (norm(a) * norm(b));
    return std::clamp(c, 0.0, 1.0);
}

std::vector<Topic> merge_vertical(std::vector<Topic> topics, double theta_v) {
    std::sort(topics.begin(), topics.end(), [](const Topic& a, const Topic& b) { return a.topic_id < b.topic_id; });
    const std::size_t n = topics.size();
    std::vector<bool> alive(n, true);
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sim[i][j] = cosine(topics[i], topics[j]);
        }
    }
    for (;;) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (alive[j] && sim[i][j] >= theta_v && sim[i][j] > best) {
                    best = sim[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best < 0.0) {
            break;
        }
        topics[bi] = merge_pair(topics[bi], topics[bj]);
        alive[bj] = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (alive[k] && k != bi) {
                const double c = cosine(topics[bi], topics[k]);
                (k < bi ? sim[k][bi] : sim[bi][k]) = c;
            }
        }
    }
    std::vector<Topic> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) {
            out.push_back(std::move(topics[i]));
        }
    }
    return out;
}

std::vector<Topic> topics_in_window(const WindowSlice& slice, const ConceptLexicon& lexicon, const TopicConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<std::string>> per_thread;
    per_thread.reserve(slice.threads.size());
    for (std::size_t ti : slice.threads) {
        per_thread.push_back(thread_ngrams(slice.corpus->threads[ti], lexicon, cfg.max_ngram));
    }
    const ConceptGraph cg = cooccurrence_graph(per_thread, cfg.min_freq);
    std::vector<Topic> topics;
    const auto cliques = bron_kerbosch(cg.graph);
    for (std::size_t k = 0; k < cliques.size(); ++k) {
        char id[48];
        std::snprintf(id, sizeof id, "w%04zu-t%04zu", slice.index, k);
        Topic t{id, slice.index, {}};
        for (std::size_t v : cliques[k]) {
            t.concepts.emplace(cg.vertices[v], cg.frequency[v]);
        }
        topics.push_back(std::move(t));
    }
    return merge_vertical(std::move(topics), cfg.theta_v);
}

std::vector<TopicStream> chain_streams(std::span<const std::vector<Topic>> windows, double theta_h) {
    std::vector<TopicStream> streams;
    std::vector<std::size_t> open;  // streams whose last member is in the previous window
    for (std::size_t w = 0; w < windows.size(); ++w) {
        std::vector<const Topic*> topics;
        for (const auto& t : windows[w]) {
            topics.push_back(&t);
        }
        std::sort(topics.begin(), topics.end(), [](const Topic* a, const Topic* b) { return a->topic_id < b->topic_id; });

        std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;  // (cos, stream, topic)
        for (std::size_t s : open) {
            for (std::size_t t = 0; t < topics.size(); ++t) {
                const double c = cosine(streams[s].members.back(), *topics[t]);
                if (c >= theta_h && c > 0.0) {
                    candidates.emplace_back(c, s, t);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
            return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
        });
        std::vector<bool> stream_taken(streams.size(), false);
        std::vector<bool> topic_taken(topics.size(), false);
        std::vector<std::size_t> next_open;
        for (const auto& [c, s, t] : candidates) {
            if (stream_taken[s] || topic_taken[t]) {
                continue;
            }
            stream_taken[s] = true;
            topic_taken[t] = true;
            streams[s].members.push_back(*topics[t]);
            next_open.push_back(s);
        }
        for (std::size_t t = 0; t < topics.size(); ++t) {
            if (topic_taken[t]) {
                continue;
            }
            char id[32];
            std::snprintf(id, sizeof id, "s%04zu", streams.size());
            next_open.push_back(streams.size());
            streams.push_back(TopicStream{id, {*topics[t]}});
        }
        std::sort(next_open.begin(), next_open.end());
        open = std::move(next_open);
    }
    return streams;
}

WindowSlice topic_network(const Topic& topic, const WindowSlice& slice, const ConceptLexicon& lexicon,
                          std::size_t max_ngram) {
    std::vector<std::size_t> keep;
    for (std::size_t ti : slice.threads) {
        const auto grams = thread_ngrams(slice.corpus->threads[ti], lexicon, max_ngram);
        if (std::any_of(grams.begin(), grams.end(), [&](const std::string& g) { return topic.concepts.contains(g); })) {
            keep.push_back(ti);
        }
    }
    return restrict_slice(slice, std::move(keep));
}

}  // namespace leadnet

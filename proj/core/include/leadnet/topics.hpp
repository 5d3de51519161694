#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leadnet/ingest.hpp"
#include "leadnet/multiplex.hpp"

namespace leadnet {

/// Multilingual surface-form -> concept dictionary plus the per-language
/// prepositions and determiners that may sit inside a concept n-gram.
class ConceptLexicon {
public:
    /// Surfaces are tokenised and lowercased. A surface listed twice keeps the
    /// lexicographically smallest concept id. The first surface registered for
    /// a concept becomes its display name.
    void add_entry(std::string_view surface, std::string_view concept_id, std::string_view language = "");
    void add_stopword(std::string_view token, std::string_view language = "");

    /// `surface<TAB>concept_id<TAB>language` lines; '#' starts a comment.
    std::vector<Diagnostic> read_tsv(std::istream& in);
    /// One token per line, optionally followed by `<TAB>language`.
    std::vector<Diagnostic> read_stopwords(std::istream& in);

    static ConceptLexicon from_files(const std::string& lexicon_path, const std::string& stopwords_path,
                                     std::vector<Diagnostic>* diagnostics = nullptr);

    bool is_stopword(std::string_view token) const;
    /// Longest lexicon match starting at tokens[pos]: (token count, concept id),
    /// or (0, "") when nothing matches.
    std::pair<std::size_t, const std::string*> match(std::span<const std::string> tokens, std::size_t pos) const;
    const std::string& display_name(const std::string& concept_id) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::set<std::string>>& stopwords_by_language() const { return stop_by_lang_; }

private:
    std::map<std::vector<std::string>, std::string> entries_;
    std::map<std::string, std::string> display_;
    std::set<std::string, std::less<>> stopwords_;
    std::map<std::string, std::set<std::string>> stop_by_lang_;
    std::size_t longest_ = 0;
};

/// Lowercases ASCII letters and splits on whitespace and ASCII punctuation
/// (underscore included). Non-ASCII bytes are kept as word characters.
std::vector<std::string> tokenize(std::string_view text);

/// Concept n-grams of a text. Runs of concepts separated only by stopwords
/// are joined with '_' using their surface forms (split into chunks of at
/// most `max_ngram` concepts); every concept is also emitted as a unigram
/// under its display name. Any other token breaks a run.
std::vector<std::string> extract_concepts(std::string_view text, const ConceptLexicon& lexicon, std::size_t max_ngram);

/// Title, description and all comments of a thread, pooled.
std::vector<std::string> thread_ngrams(const ThreadRecord& thread, const ConceptLexicon& lexicon,
                                       std::size_t max_ngram);

struct TopicConfig {
    std::size_t min_freq = 3;  // m
    double theta_v = 0.5;
    double theta_h = 0.3;
    std::size_t max_ngram = 4;

    void validate() const;
};

/// Co-occurrence graph over n-grams whose window frequency is at least m.
/// Vertices are sorted by name.
struct ConceptGraph {
    std::vector<std::string> vertices;
    std::vector<std::size_t> frequency;
    UndirectedGraph graph;
};

ConceptGraph cooccurrence_graph(std::span<const std::vector<std::string>> per_thread_ngrams, std::size_t min_freq);

/// All maximal cliques with at least two vertices (Bron-Kerbosch with Tomita
/// pivoting). Each clique is sorted; the list is in lexicographic order.
std::vector<std::vector<std::size_t>> bron_kerbosch(const UndirectedGraph& graph);

struct Topic {
    std::string topic_id;
    std::size_t window = 0;
    /// n-gram -> frequency within the window
    std::map<std::string, std::size_t> concepts;

    friend bool operator==(const Topic&, const Topic&) = default;
};

double cosine(const Topic& a, const Topic& b);

/// Greedy agglomeration within one window: merge the most similar pair while
/// its cosine is >= theta_v (ties to the lexicographically smaller id pair).
/// The merged topic keeps the smaller id and the union of members.
std::vector<Topic> merge_vertical(std::vector<Topic> topics, double theta_v);

std::vector<Topic> topics_in_window(const WindowSlice& slice, const ConceptLexicon& lexicon, const TopicConfig& cfg);

struct TopicStream {
    std::string stream_id;
    std::vector<Topic> members;  // strictly increasing window
};

/// `windows[w]` holds the topics of window w. Streams only extend across
/// consecutive windows; candidate (stream, topic) pairs are matched greedily
/// in descending cosine order.
std::vector<TopicStream> chain_streams(std::span<const std::vector<Topic>> windows, double theta_h);

/// Sub-slice of threads mentioning at least one of the topic's n-grams.
WindowSlice topic_network(const Topic& topic, const WindowSlice& slice, const ConceptLexicon& lexicon,
                          std::size_t max_ngram);

}  // namespace leadnet

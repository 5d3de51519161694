#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "leadnet/types.hpp"

namespace leadnet {

enum class LogFormat { jsonl, csv };

/// Parses a thread log.
///
/// JSONL carries one thread object per line with an embedded `comments`
/// array. CSV mirrors the flat export of the originating platform:
///
///     content_id,content_title,content_description,publication_date,
///     content_tags,content_author,user_title,gender,
///     {comment_id,comment_description,comment_date,comment_author,
///      commenting_user_title,gender}*
///
/// with tags separated by ';' inside their field. A header row whose first
/// cell is `content_id` is skipped.
///
/// Malformed records are skipped with a diagnostic; comments inside a thread
/// are sorted by (created_at, comment_id) and numbered 1..n. Throws IoError
/// when the stream cannot be read and CorruptInputError when more than half
/// of the non-blank records are malformed.
ParseResult<ThreadRecord> parse_thread_log(std::istream& input, LogFormat format);

/// Parses `{"rater_id":..,"target_id":..,"value":±1}` lines. A value of 0 is
/// the absence of an opinion and is skipped like any other out-of-range
/// value. Repeated (rater, target) pairs collapse to the last occurrence.
ParseResult<RatingEvent> parse_ratings(std::istream& input);

/// Same error contract as parse_thread_log, reading from a file.
ParseResult<ThreadRecord> read_thread_log(const std::string& path, std::optional<LogFormat> format = {});
ParseResult<RatingEvent> read_ratings(const std::string& path);

/// Location of a message (thread body or comment) inside a corpus.
struct MessageRef {
    std::size_t thread = 0;
    std::optional<std::size_t> comment;
    std::size_t author = 0;
};

/// Immutable, validated view over threads, ratings and their users.
///
/// Users are indexed densely in user_id order. Every author, commenter and
/// rater is a user; the first (role, gender) seen for an id wins and all
/// records are rewritten to that pair.
struct Corpus {
    std::vector<UserRef> users;
    std::vector<ThreadRecord> threads;
    std::vector<RatingEvent> ratings;
    std::vector<Diagnostic> diagnostics;

    std::size_t n_users() const { return users.size(); }
    std::optional<std::size_t> user_index(std::string_view user_id) const;
    /// Index of a user known to be present; throws ContractViolation otherwise.
    std::size_t index_of(std::string_view user_id) const;
    const MessageRef* message(std::string_view message_id) const;

    /// Compares users, threads and ratings (diagnostics excluded).
    bool same_content(const Corpus& other) const;

private:
    friend Corpus build_corpus(std::vector<ThreadRecord> threads, std::vector<RatingEvent> ratings);

    std::unordered_map<std::string, std::size_t> user_lookup_;
    std::unordered_map<std::string, MessageRef> message_lookup_;
};

/// Throws Error when no thread survives validation.
Corpus build_corpus(std::vector<ThreadRecord> threads, std::vector<RatingEvent> ratings);

void write_thread_log(std::ostream& out, const Corpus& corpus);
void write_ratings(std::ostream& out, const Corpus& corpus);

struct WindowConfig {
    enum class Unit { week, month, days };
    Unit unit = Unit::month;
    int days = 30;  // used when unit == days
    /// Defaults to the start of the UTC day (or month, for monthly windows)
    /// containing the earliest publication.
    std::optional<Timestamp> origin;

    static WindowConfig week() { return {Unit::week, 7, std::nullopt}; }
    static WindowConfig month() { return {Unit::month, 0, std::nullopt}; }
    static WindowConfig of_days(int n) { return {Unit::days, n, std::nullopt}; }

    /// "week", "month" or "days:N".
    static WindowConfig parse(std::string_view text);
    std::string to_string() const;
};

/// A half-open interval [start, end) of a corpus together with the threads
/// published in it and the ratings targeting those threads' messages.
/// Holds a non-owning pointer: the corpus must outlive the slice.
struct WindowSlice {
    const Corpus* corpus = nullptr;
    std::size_t index = 0;
    Timestamp start = 0;
    Timestamp end = 0;
    std::vector<std::size_t> threads;
    std::vector<std::size_t> ratings;

    bool empty() const { return threads.empty(); }
};

/// The whole corpus as one slice spanning [min published_at, max + 1).
WindowSlice whole_corpus(const Corpus& corpus);

/// Restricts a slice to the given subset of its threads, keeping the
/// ratings that target messages in that subset.
WindowSlice restrict_slice(const WindowSlice& slice, std::vector<std::size_t> thread_subset);

/// Tiles [origin, max published_at] with consecutive windows. Empty windows
/// are kept so that time series have no holes.
std::vector<WindowSlice> window_partition(const Corpus& corpus, const WindowConfig& cfg);

}  // namespace leadnet

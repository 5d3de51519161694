#include "leadnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "leadnet/time.hpp"

namespace leadnet {

namespace {

using nlohmann::json;

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void check_stream(std::istream& input) {
    if (input.bad()) {
        throw IoError("input stream could not be read");
    }
}

void check_corruption(std::size_t malformed, std::size_t total, std::string_view what) {
    if (total > 0 && malformed * 2 > total) {
        throw CorruptInputError("corrupt input: " + std::to_string(malformed) + " of " + std::to_string(total) +
                                " " + std::string(what) + " records are malformed");
    }
}

std::optional<std::string> string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        return std::nullopt;
    }
    return it->get<std::string>();
}

Gender json_gender(const json& obj) {
    auto it = obj.find("gender");
    if (it == obj.end()) {
        return Gender::unknown;
    }
    if (it->is_number_integer()) {
        const auto v = it->get<long long>();
        return v == 0 ? Gender::male : v == 1 ? Gender::female : Gender::unknown;
    }
    if (it->is_string()) {
        return parse_gender(it->get_ref<const std::string&>());
    }
    return Gender::unknown;
}

/// Returns the user or nullopt when user_id is missing/empty.
std::optional<UserRef> json_user(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_object()) {
        return std::nullopt;
    }
    auto id = string_field(*it, "user_id");
    if (!id || id->empty()) {
        return std::nullopt;
    }
    UserRef user{*id, Role::unknown, json_gender(*it)};
    if (auto role = string_field(*it, "role")) {
        user.role = parse_role(*role);
    }
    return user;
}

/// Sorts comments by (created_at, comment_id), clamps early comments to the
/// publication time and assigns order_k.
void normalize_comments(ThreadRecord& thread, std::size_t line, std::vector<Diagnostic>& diags) {
    for (auto& c : thread.comments) {
        if (c.created_at < thread.published_at) {
            diags.push_back({line, "comment " + c.comment_id + " predates its thread; clamped to published_at"});
            c.created_at = thread.published_at;
        }
    }
    std::sort(thread.comments.begin(), thread.comments.end(), [](const CommentRecord& a, const CommentRecord& b) {
        return std::tie(a.created_at, a.comment_id) < std::tie(b.created_at, b.comment_id);
    });
    int k = 1;
    for (auto& c : thread.comments) {
        c.order_k = k++;
    }
}

std::optional<ThreadRecord> thread_from_json(const std::string& line_text, std::size_t line,
                                             std::vector<Diagnostic>& diags) {
    json obj = json::parse(line_text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        diags.push_back({line, "invalid JSON"});
        return std::nullopt;
    }
    ThreadRecord thread;
    auto id = string_field(obj, "thread_id");
    if (!id || id->empty()) {
        diags.push_back({line, "missing thread_id"});
        return std::nullopt;
    }
    thread.thread_id = *id;
    auto published = string_field(obj, "published_at");
    if (!published) {
        diags.push_back({line, "missing published_at"});
        return std::nullopt;
    }
    auto ts = parse_timestamp(*published);
    if (!ts) {
        diags.push_back({line, "invalid published_at '" + *published + "'"});
        return std::nullopt;
    }
    thread.published_at = *ts;
    auto author = json_user(obj, "author");
    if (!author) {
        diags.push_back({line, "missing author_id"});
        return std::nullopt;
    }
    thread.author = std::move(*author);
    thread.title = string_field(obj, "title").value_or("");
    thread.description = string_field(obj, "description").value_or("");
    if (auto it = obj.find("tags"); it != obj.end() && it->is_array()) {
        for (const auto& tag : *it) {
            if (tag.is_string()) {
                thread.tags.push_back(tag.get<std::string>());
            }
        }
    }
    if (auto it = obj.find("comments"); it != obj.end() && it->is_array()) {
        for (const auto& cj : *it) {
            if (!cj.is_object()) {
                diags.push_back({line, "comment is not an object; skipped"});
                continue;
            }
            CommentRecord c;
            auto cid = string_field(cj, "comment_id");
            auto created = string_field(cj, "created_at");
            auto cauthor = json_user(cj, "author");
            std::optional<Timestamp> cts = created ? parse_timestamp(*created) : std::nullopt;
            if (!cid || cid->empty() || !cts || !cauthor) {
                diags.push_back({line, "malformed comment in thread " + thread.thread_id + "; skipped"});
                continue;
            }
            c.comment_id = *cid;
            c.created_at = *cts;
            c.author = std::move(*cauthor);
            c.text = string_field(cj, "text").value_or("");
            thread.comments.push_back(std::move(c));
        }
    }
    normalize_comments(thread, line, diags);
    return thread;
}

/// RFC 4180 record reader. Quoted fields may span lines; `line` receives the
/// 1-based line on which the record starts.
bool read_csv_record(std::istream& input, std::vector<std::string>& fields, std::size_t& line_no,
                     std::size_t& start_line, bool& unterminated) {
    fields.clear();
    unterminated = false;
    std::string line;
    if (!std::getline(input, line)) {
        return false;
    }
    ++line_no;
    start_line = line_no;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    for (;;) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field.push_back(c);
                }
            } else if (c == '"' && field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
            } else if (c == '\r' && i + 1 == line.size()) {
                // CRLF line ending
            } else {
                field.push_back(c);
            }
        }
        if (!in_quotes) {
            break;
        }
        if (!std::getline(input, line)) {
            unterminated = true;
            break;
        }
        ++line_no;
        field.push_back('\n');
    }
    fields.push_back(std::move(field));
    return true;
}

std::optional<ThreadRecord> thread_from_csv(const std::vector<std::string>& f, std::size_t line,
                                            std::vector<Diagnostic>& diags) {
    if (f.size() < 8 || (f.size() - 8) % 6 != 0) {
        diags.push_back({line, "wrong field count " + std::to_string(f.size())});
        return std::nullopt;
    }
    ThreadRecord thread;
    if (f[0].empty()) {
        diags.push_back({line, "missing thread_id"});
        return std::nullopt;
    }
    thread.thread_id = f[0];
    thread.title = f[1];
    thread.description = f[2];
    auto ts = parse_timestamp(f[3]);
    if (!ts) {
        diags.push_back({line, f[3].empty() ? "missing published_at" : "invalid published_at '" + f[3] + "'"});
        return std::nullopt;
    }
    thread.published_at = *ts;
    std::string_view tags = f[4];
    while (!tags.empty()) {
        const auto pos = tags.find(';');
        std::string_view tag = tags.substr(0, pos);
        while (!tag.empty() && tag.front() == ' ') tag.remove_prefix(1);
        while (!tag.empty() && tag.back() == ' ') tag.remove_suffix(1);
        if (!tag.empty()) {
            thread.tags.emplace_back(tag);
        }
        if (pos == std::string_view::npos) {
            break;
        }
        tags.remove_prefix(pos + 1);
    }
    if (f[5].empty()) {
        diags.push_back({line, "missing author_id"});
        return std::nullopt;
    }
    thread.author = UserRef{f[5], parse_role(f[6]), parse_gender(f[7])};
    for (std::size_t base = 8; base < f.size(); base += 6) {
        auto cts = parse_timestamp(f[base + 2]);
        if (f[base].empty() || f[base + 3].empty() || !cts) {
            diags.push_back({line, "malformed comment in thread " + thread.thread_id + "; skipped"});
            continue;
        }
        CommentRecord c;
        c.comment_id = f[base];
        c.text = f[base + 1];
        c.created_at = *cts;
        c.author = UserRef{f[base + 3], parse_role(f[base + 4]), parse_gender(f[base + 5])};
        thread.comments.push_back(std::move(c));
    }
    normalize_comments(thread, line, diags);
    return thread;
}

nlohmann::ordered_json user_json(const UserRef& u) {
    nlohmann::ordered_json j;
    j["user_id"] = u.user_id;
    j["role"] = std::string(to_string(u.role));
    if (u.gender == Gender::unknown) {
        j["gender"] = "unknown";
    } else {
        j["gender"] = static_cast<int>(u.gender);
    }
    return j;
}

}  // namespace

ParseResult<ThreadRecord> parse_thread_log(std::istream& input, LogFormat format) {
    if (!input.good()) {
        throw IoError("input stream is not readable");
    }
    ParseResult<ThreadRecord> result;
    std::size_t total = 0;
    std::size_t malformed = 0;

    if (format == LogFormat::jsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(input, line)) {
            ++line_no;
            if (is_blank(line)) {
                continue;
            }
            ++total;
            if (auto thread = thread_from_json(line, line_no, result.diagnostics)) {
                result.records.push_back(std::move(*thread));
            } else {
                ++malformed;
            }
        }
    } else {
        std::vector<std::string> fields;
        std::size_t line_no = 0;
        std::size_t start = 0;
        bool unterminated = false;
        bool first = true;
        while (read_csv_record(input, fields, line_no, start, unterminated)) {
            if (fields.size() == 1 && is_blank(fields[0])) {
                continue;
            }
            if (first && !fields.empty() && fields[0] == "content_id") {
                first = false;
                continue;
            }
            first = false;
            ++total;
            if (unterminated) {
                result.diagnostics.push_back({start, "unterminated quoted field"});
                ++malformed;
                continue;
            }
            if (auto thread = thread_from_csv(fields, start, result.diagnostics)) {
                result.records.push_back(std::move(*thread));
            } else {
                ++malformed;
            }
        }
    }
    check_stream(input);
    check_corruption(malformed, total, "thread");
    return result;
}

ParseResult<RatingEvent> parse_ratings(std::istream& input) {
    if (!input.good()) {
        throw IoError("input stream is not readable");
    }
    ParseResult<RatingEvent> result;
    std::size_t total = 0;
    std::size_t malformed = 0;
    std::string line;
    std::size_t line_no = 0;
    std::vector<RatingEvent> events;
    while (std::getline(input, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        ++total;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            result.diagnostics.push_back({line_no, "invalid JSON"});
            ++malformed;
            continue;
        }
        auto rater = string_field(obj, "rater_id");
        auto target = string_field(obj, "target_id");
        if (!rater || rater->empty()) {
            result.diagnostics.push_back({line_no, "missing rater_id"});
            ++malformed;
            continue;
        }
        if (!target || target->empty()) {
            result.diagnostics.push_back({line_no, "missing target_id"});
            ++malformed;
            continue;
        }
        auto it = obj.find("value");
        if (it == obj.end() || !it->is_number_integer()) {
            result.diagnostics.push_back({line_no, "missing or non-integer value"});
            ++malformed;
            continue;
        }
        const auto value = it->get<long long>();
        if (value != 1 && value != -1) {
            result.diagnostics.push_back({line_no, "value " + std::to_string(value) + " is not a rating (expected -1 or +1)"});
            ++malformed;
            continue;
        }
        events.push_back(RatingEvent{UserRef{*rater, Role::unknown, Gender::unknown}, *target, static_cast<int>(value)});
    }
    check_stream(input);
    check_corruption(malformed, total, "rating");

    // Last occurrence of each (rater, target) wins and keeps its position.
    std::set<std::pair<std::string, std::string>> seen;
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (seen.emplace(it->rater.user_id, it->target_message_id).second) {
            result.records.push_back(std::move(*it));
        }
    }
    std::reverse(result.records.begin(), result.records.end());
    return result;
}

ParseResult<ThreadRecord> read_thread_log(const std::string& path, std::optional<LogFormat> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open thread log '" + path + "'");
    }
    if (!format) {
        const bool is_csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
        format = is_csv ? LogFormat::csv : LogFormat::jsonl;
    }
    return parse_thread_log(in, *format);
}

ParseResult<RatingEvent> read_ratings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open ratings file '" + path + "'");
    }
    return parse_ratings(in);
}

std::optional<std::size_t> Corpus::user_index(std::string_view user_id) const {
    auto it = user_lookup_.find(std::string(user_id));
    if (it == user_lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Corpus::index_of(std::string_view user_id) const {
    auto idx = user_index(user_id);
    if (!idx) {
        throw ContractViolation("user '" + std::string(user_id) + "' is not in the corpus");
    }
    return *idx;
}

const MessageRef* Corpus::message(std::string_view message_id) const {
    auto it = message_lookup_.find(std::string(message_id));
    return it == message_lookup_.end() ? nullptr : &it->second;
}

bool Corpus::same_content(const Corpus& other) const {
    return users == other.users && threads == other.threads && ratings == other.ratings;
}

Corpus build_corpus(std::vector<ThreadRecord> threads, std::vector<RatingEvent> ratings) {
    Corpus corpus;
    auto& diags = corpus.diagnostics;

    std::set<std::string> thread_ids;
    for (auto& t : threads) {
        if (!thread_ids.insert(t.thread_id).second) {
            diags.push_back({0, "duplicate thread_id " + t.thread_id + "; later copy dropped"});
            continue;
        }
        corpus.threads.push_back(std::move(t));
    }
    if (corpus.threads.empty()) {
        throw Error("corpus has no valid threads");
    }

    // First occurrence of a user id fixes its attributes.
    std::map<std::string, UserRef> registry;
    auto note_user = [&](const UserRef& u) {
        auto [it, inserted] = registry.emplace(u.user_id, u);
        if (!inserted && it->second != u && !(u.role == Role::unknown && u.gender == Gender::unknown)) {
            diags.push_back({0, "user " + u.user_id + " has conflicting role/gender; keeping first occurrence"});
        }
    };
    for (const auto& t : corpus.threads) {
        note_user(t.author);
        for (const auto& c : t.comments) {
            note_user(c.author);
        }
    }
    for (const auto& r : ratings) {
        registry.emplace(r.rater.user_id, r.rater);
    }

    corpus.users.reserve(registry.size());
    for (auto& [id, user] : registry) {
        corpus.user_lookup_.emplace(id, corpus.users.size());
        corpus.users.push_back(user);
    }
    auto canonical = [&](UserRef& u) { u = corpus.users[corpus.user_lookup_.at(u.user_id)]; };

    for (std::size_t ti = 0; ti < corpus.threads.size(); ++ti) {
        auto& t = corpus.threads[ti];
        canonical(t.author);
        auto register_message = [&](const std::string& id, MessageRef ref) {
            if (!corpus.message_lookup_.emplace(id, ref).second) {
                diags.push_back({0, "message id " + id + " is not unique; ratings resolve to its first use"});
            }
        };
        register_message(t.thread_id, MessageRef{ti, std::nullopt, corpus.user_lookup_.at(t.author.user_id)});
        for (std::size_t ci = 0; ci < t.comments.size(); ++ci) {
            auto& c = t.comments[ci];
            canonical(c.author);
            register_message(c.comment_id, MessageRef{ti, ci, corpus.user_lookup_.at(c.author.user_id)});
        }
    }

    std::set<std::pair<std::string, std::string>> seen;
    std::vector<RatingEvent> kept;
    std::size_t dropped = 0;
    for (auto it = ratings.rbegin(); it != ratings.rend(); ++it) {
        if (!corpus.message_lookup_.contains(it->target_message_id)) {
            ++dropped;
            diags.push_back({0, "rating by " + it->rater.user_id + " on unknown message " + it->target_message_id +
                                    " dropped"});
            continue;
        }
        if (!seen.emplace(it->rater.user_id, it->target_message_id).second) {
            continue;
        }
        kept.push_back(std::move(*it));
    }
    std::reverse(kept.begin(), kept.end());
    for (auto& r : kept) {
        canonical(r.rater);
    }
    corpus.ratings = std::move(kept);
    // Drop diagnostics were emitted back to front.
    if (dropped > 1) {
        std::reverse(diags.end() - static_cast<std::ptrdiff_t>(dropped), diags.end());
    }
    return corpus;
}

void write_thread_log(std::ostream& out, const Corpus& corpus) {
    for (const auto& t : corpus.threads) {
        nlohmann::ordered_json j;
        j["thread_id"] = t.thread_id;
        j["title"] = t.title;
        j["description"] = t.description;
        j["published_at"] = format_timestamp(t.published_at);
        j["tags"] = t.tags;
        j["author"] = user_json(t.author);
        j["comments"] = nlohmann::ordered_json::array();
        for (const auto& c : t.comments) {
            nlohmann::ordered_json cj;
            cj["comment_id"] = c.comment_id;
            cj["text"] = c.text;
            cj["created_at"] = format_timestamp(c.created_at);
            cj["author"] = user_json(c.author);
            j["comments"].push_back(std::move(cj));
        }
        out << j.dump() << '\n';
    }
}

void write_ratings(std::ostream& out, const Corpus& corpus) {
    for (const auto& r : corpus.ratings) {
        nlohmann::ordered_json j;
        j["rater_id"] = r.rater.user_id;
        j["target_id"] = r.target_message_id;
        j["value"] = r.value;
        out << j.dump() << '\n';
    }
}

WindowConfig WindowConfig::parse(std::string_view text) {
    if (text == "week") {
        return week();
    }
    if (text == "month") {
        return month();
    }
    if (text.starts_with("days:")) {
        const std::string digits(text.substr(5));
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == digits.size() && !digits.empty() && n >= 1) {
            return of_days(n);
        }
    }
    throw ContractViolation("invalid window '" + std::string(text) + "' (expected week, month or days:N)");
}

std::string WindowConfig::to_string() const {
    switch (unit) {
        case Unit::week: return "week";
        case Unit::month: return "month";
        case Unit::days: break;
    }
    return "days:" + std::to_string(days);
}

WindowSlice whole_corpus(const Corpus& corpus) {
    WindowSlice slice;
    slice.corpus = &corpus;
    if (corpus.threads.empty()) {
        return slice;
    }
    auto [lo, hi] = std::minmax_element(corpus.threads.begin(), corpus.threads.end(),
                                        [](const auto& a, const auto& b) { return a.published_at < b.published_at; });
    slice.start = lo->published_at;
    slice.end = hi->published_at + 1;
    slice.threads.resize(corpus.threads.size());
    for (std::size_t i = 0; i < slice.threads.size(); ++i) {
        slice.threads[i] = i;
    }
    slice.ratings.resize(corpus.ratings.size());
    for (std::size_t i = 0; i < slice.ratings.size(); ++i) {
        slice.ratings[i] = i;
    }
    return slice;
}

WindowSlice restrict_slice(const WindowSlice& slice, std::vector<std::size_t> thread_subset) {
    WindowSlice out;
    out.corpus = slice.corpus;
    out.index = slice.index;
    out.start = slice.start;
    out.end = slice.end;
    std::sort(thread_subset.begin(), thread_subset.end());
    thread_subset.erase(std::unique(thread_subset.begin(), thread_subset.end()), thread_subset.end());
    out.threads = std::move(thread_subset);
    for (std::size_t ri : slice.ratings) {
        const MessageRef* msg = slice.corpus->message(slice.corpus->ratings[ri].target_message_id);
        if (msg && std::binary_search(out.threads.begin(), out.threads.end(), msg->thread)) {
            out.ratings.push_back(ri);
        }
    }
    return out;
}

std::vector<WindowSlice> window_partition(const Corpus& corpus, const WindowConfig& cfg) {
    if (corpus.threads.empty()) {
        throw ContractViolation("window_partition requires a non-empty corpus");
    }
    if (cfg.unit == WindowConfig::Unit::days && cfg.days < 1) {
        throw ContractViolation("window length must be at least one day");
    }
    Timestamp lo = corpus.threads.front().published_at;
    Timestamp hi = lo;
    for (const auto& t : corpus.threads) {
        lo = std::min(lo, t.published_at);
        hi = std::max(hi, t.published_at);
    }
    const bool monthly = cfg.unit == WindowConfig::Unit::month;
    const Timestamp origin = cfg.origin.value_or(monthly ? floor_to_month(lo) : floor_to_day(lo));
    if (origin > lo) {
        throw ContractViolation("window origin lies after the earliest thread");
    }
    const Timestamp span = (cfg.unit == WindowConfig::Unit::week ? 7 : cfg.days) * seconds_per_day;

    std::vector<Timestamp> starts;
    for (int i = 0;; ++i) {
        const Timestamp s = monthly ? add_months(origin, i) : origin + i * span;
        if (s > hi) {
            break;
        }
        starts.push_back(s);
    }
    std::vector<WindowSlice> slices(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        slices[i].corpus = &corpus;
        slices[i].index = i;
        slices[i].start = starts[i];
        slices[i].end = i + 1 < starts.size() ? starts[i + 1] : (monthly ? add_months(origin, static_cast<int>(i) + 1)
                                                                         : starts[i] + span);
    }
    std::vector<std::size_t> window_of(corpus.threads.size());
    for (std::size_t ti = 0; ti < corpus.threads.size(); ++ti) {
        const Timestamp t = corpus.threads[ti].published_at;
        auto it = std::upper_bound(starts.begin(), starts.end(), t);
        const auto w = static_cast<std::size_t>(it - starts.begin()) - 1;
        window_of[ti] = w;
        slices[w].threads.push_back(ti);
    }
    for (std::size_t ri = 0; ri < corpus.ratings.size(); ++ri) {
        if (const MessageRef* msg = corpus.message(corpus.ratings[ri].target_message_id)) {
            slices[window_of[msg->thread]].ratings.push_back(ri);
        }
    }
    return slices;
}

}  // namespace leadnet

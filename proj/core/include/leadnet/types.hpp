#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leadnet {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

enum class Role { manager, director, consultant, senior_consultant, partner, external, unknown };

enum class Gender { male = 0, female = 1, unknown = 2 };

std::string_view to_string(Role role);
std::string_view to_string(Gender gender);

/// Accepts the canonical names plus spaced / capitalised variants
/// ("Senior Consultant"). Anything unrecognised maps to Role::unknown.
Role parse_role(std::string_view text);

/// "0"/"male" -> male, "1"/"female" -> female, anything else -> unknown.
Gender parse_gender(std::string_view text);

struct UserRef {
    std::string user_id;
    Role role = Role::unknown;
    Gender gender = Gender::unknown;

    friend bool operator==(const UserRef&, const UserRef&) = default;
};

struct CommentRecord {
    std::string comment_id;
    std::string text;
    Timestamp created_at = 0;
    UserRef author;
    /// 1-based position within the thread after timestamp sorting.
    int order_k = 0;

    friend bool operator==(const CommentRecord&, const CommentRecord&) = default;
};

struct ThreadRecord {
    std::string thread_id;
    std::string title;
    std::string description;
    Timestamp published_at = 0;
    std::vector<std::string> tags;
    UserRef author;
    std::vector<CommentRecord> comments;

    friend bool operator==(const ThreadRecord&, const ThreadRecord&) = default;
};

struct RatingEvent {
    UserRef rater;
    std::string target_message_id;
    int value = 0;  // -1 dislike, +1 like

    friend bool operator==(const RatingEvent&, const RatingEvent&) = default;
};

/// A non-fatal finding produced while parsing or assembling data.
/// `line` is 1-based; 0 means the finding is not tied to an input line.
struct Diagnostic {
    std::size_t line = 0;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string to_string(const Diagnostic& diagnostic);

template <typename T>
struct ParseResult {
    std::vector<T> records;
    std::vector<Diagnostic> diagnostics;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// More than half of the records in an input stream were malformed.
class CorruptInputError : public Error {
public:
    using Error::Error;
};

/// A caller broke a documented precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

}  // namespace leadnet

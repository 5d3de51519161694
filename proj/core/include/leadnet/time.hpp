#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "leadnet/types.hpp"

namespace leadnet {

/// Parses "YYYY-MM-DDTHH:MM:SSZ". A space may replace the 'T', the trailing
/// 'Z' is optional and a numeric "+HH:MM" / "-HH:MM" offset is honoured.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

/// Start of the UTC day containing `ts`.
Timestamp floor_to_day(Timestamp ts);

/// 00:00:00 on the first day of the UTC month containing `ts`.
Timestamp floor_to_month(Timestamp ts);

/// Calendar-month arithmetic. The day of month is clamped to the length of
/// the target month (Jan 31 + 1 month = Feb 28/29); time of day is kept.
Timestamp add_months(Timestamp ts, int months);

inline constexpr Timestamp seconds_per_day = 86400;

}  // namespace leadnet

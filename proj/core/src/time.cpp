#include "leadnet/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace leadnet {

namespace {

using namespace std::chrono;

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
}

Timestamp from_civil(int y, unsigned m, unsigned d) {
    const sys_days days{year{y} / month{m} / day{d}};
    return static_cast<Timestamp>(days.time_since_epoch().count()) * seconds_per_day;
}

year_month_day civil(Timestamp ts) {
    Timestamp day_count = ts / seconds_per_day;
    if (ts % seconds_per_day < 0) {
        --day_count;
    }
    return year_month_day{sys_days{days{day_count}}};
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    // YYYY-MM-DD?HH:MM:SS = 19 characters.
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    if (!read_int(text, 0, 4, y) || !read_int(text, 5, 2, mo) || !read_int(text, 8, 2, d) ||
        !read_int(text, 11, 2, h) || !read_int(text, 14, 2, mi) || !read_int(text, 17, 2, s)) {
        return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        return std::nullopt;
    }
    Timestamp ts = from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) + h * 3600 + mi * 60 + s;

    std::string_view rest = text.substr(19);
    // Fractional seconds are accepted and truncated.
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') {
            ++i;
        }
        if (i == 1) {
            return std::nullopt;
        }
        rest.remove_prefix(i);
    }
    if (rest.empty() || rest == "Z") {
        return ts;
    }
    if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
        int oh = 0, om = 0;
        if (!read_int(rest, 1, 2, oh) || !read_int(rest, 4, 2, om) || oh > 23 || om > 59) {
            return std::nullopt;
        }
        const Timestamp offset = oh * 3600 + om * 60;
        return rest[0] == '+' ? ts - offset : ts + offset;
    }
    return std::nullopt;
}

std::string format_timestamp(Timestamp ts) {
    const year_month_day ymd = civil(ts);
    Timestamp secs = ts - floor_to_day(ts);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(secs / 3600), static_cast<long long>((secs / 60) % 60),
                  static_cast<long long>(secs % 60));
    return buf;
}

Timestamp floor_to_day(Timestamp ts) {
    Timestamp r = ts % seconds_per_day;
    if (r < 0) {
        r += seconds_per_day;
    }
    return ts - r;
}

Timestamp floor_to_month(Timestamp ts) {
    const year_month_day ymd = civil(ts);
    return from_civil(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), 1);
}

Timestamp add_months(Timestamp ts, int months) {
    const year_month_day ymd = civil(ts);
    const Timestamp time_of_day = ts - floor_to_day(ts);
    year_month_day target = ymd + std::chrono::months{months};
    if (!target.ok()) {
        target = year_month_day{year_month_day_last{target.year(), month_day_last{target.month()}}};
    }
    return from_civil(static_cast<int>(target.year()), static_cast<unsigned>(target.month()),
                      static_cast<unsigned>(target.day())) +
           time_of_day;
}

}  // namespace leadnet

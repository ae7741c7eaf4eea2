#include "skg/time.hpp"

#include "skg/error.hpp"

#include <chrono>
#include <cstdio>

namespace skg {
namespace {

using namespace std::chrono;

constexpr std::int64_t kSecondsPerDay = 86400;

bool parse_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > text.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

std::int64_t days_since_epoch(int y, unsigned m, unsigned d) {
    return sys_days{year{y} / month{m} / day{d}}.time_since_epoch().count();
}

year_month_day civil(Instant t) {
    std::int64_t days = t.seconds / kSecondsPerDay;
    if (t.seconds % kSecondsPerDay < 0) --days;
    return year_month_day{sys_days{std::chrono::days{days}}};
}

}  // namespace

Instant parse_iso8601(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    bool ok = text.size() >= 19 && parse_digits(text, 0, 4, y) && text[4] == '-' &&
              parse_digits(text, 5, 2, mo) && text[7] == '-' && parse_digits(text, 8, 2, d) &&
              (text[10] == 'T' || text[10] == ' ') && parse_digits(text, 11, 2, h) &&
              text[13] == ':' && parse_digits(text, 14, 2, mi) && text[16] == ':' &&
              parse_digits(text, 17, 2, s);
    std::string_view rest = ok ? text.substr(19) : std::string_view{};
    ok = ok && (rest.empty() || rest == "Z" || rest == "+00:00");
    ok = ok && h < 24 && mi < 60 && s < 60;
    year_month_day ymd{year{y} / month{static_cast<unsigned>(mo)} / day{static_cast<unsigned>(d)}};
    if (!ok || !ymd.ok()) {
        throw ValidationError("timestamp", "invalid ISO-8601 UTC timestamp: '" + std::string(text) + "'");
    }
    return Instant{days_since_epoch(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + s};
}

std::string format_iso8601(Instant t) {
    auto ymd = civil(t);
    std::int64_t secs = t.seconds - sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60),
                  static_cast<int>(secs % 60));
    return buf;
}

std::string_view to_string(Granularity g) {
    switch (g) {
        case Granularity::hour: return "hour";
        case Granularity::day: return "day";
        case Granularity::month: return "month";
        case Granularity::year: return "year";
    }
    return "hour";
}

Granularity parse_granularity(std::string_view text) {
    if (text == "hour") return Granularity::hour;
    if (text == "day") return Granularity::day;
    if (text == "month") return Granularity::month;
    if (text == "year") return Granularity::year;
    throw ValidationError("granularity", "unknown granularity '" + std::string(text) + "'");
}

Instant Interval::end() const {
    auto ymd = civil(start);
    switch (granularity) {
        case Granularity::hour: return Instant{start.seconds + 3600};
        case Granularity::day: return Instant{start.seconds + kSecondsPerDay};
        case Granularity::month: {
            year_month_day next = ymd + months{1};
            return Instant{sys_days{next}.time_since_epoch().count() * kSecondsPerDay};
        }
        case Granularity::year: {
            year_month_day next = ymd + years{1};
            return Instant{sys_days{next}.time_since_epoch().count() * kSecondsPerDay};
        }
    }
    return start;
}

std::string Interval::label() const {
    auto ymd = civil(start);
    int y = static_cast<int>(ymd.year());
    unsigned m = static_cast<unsigned>(ymd.month());
    unsigned d = static_cast<unsigned>(ymd.day());
    char buf[32];
    switch (granularity) {
        case Granularity::hour: {
            std::int64_t hour = (start.seconds - sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay) / 3600;
            std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d", y, m, d, static_cast<int>(hour));
            break;
        }
        case Granularity::day: std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d); break;
        case Granularity::month: std::snprintf(buf, sizeof buf, "%04d-%02u", y, m); break;
        case Granularity::year: std::snprintf(buf, sizeof buf, "%04d", y); break;
    }
    return buf;
}

Interval Interval::previous() const {
    if (granularity == Granularity::hour || granularity == Granularity::day) {
        return Interval{granularity, Instant{start.seconds - length_seconds()}};
    }
    return interval_containing(granularity, Instant{start.seconds - 1});
}

Interval interval_containing(Granularity g, Instant t) {
    auto ymd = civil(t);
    std::int64_t day_start = sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay;
    switch (g) {
        case Granularity::hour: return {g, Instant{day_start + (t.seconds - day_start) / 3600 * 3600}};
        case Granularity::day: return {g, Instant{day_start}};
        case Granularity::month:
            return {g, Instant{days_since_epoch(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), 1) *
                               kSecondsPerDay}};
        case Granularity::year:
            return {g, Instant{days_since_epoch(static_cast<int>(ymd.year()), 1, 1) * kSecondsPerDay}};
    }
    return {g, t};
}

Interval parse_interval_label(std::string_view label) {
    auto fail = [&]() -> Interval {
        throw ValidationError("interval", "invalid interval label '" + std::string(label) + "'");
    };
    int y = 0, m = 1, d = 1, h = 0;
    Granularity g;
    if (label.size() == 4 && parse_digits(label, 0, 4, y)) {
        g = Granularity::year;
    } else if (label.size() == 7 && parse_digits(label, 0, 4, y) && label[4] == '-' && parse_digits(label, 5, 2, m)) {
        g = Granularity::month;
    } else if (label.size() == 10 && parse_digits(label, 0, 4, y) && label[4] == '-' &&
               parse_digits(label, 5, 2, m) && label[7] == '-' && parse_digits(label, 8, 2, d)) {
        g = Granularity::day;
    } else if (label.size() == 13 && parse_digits(label, 0, 4, y) && label[4] == '-' &&
               parse_digits(label, 5, 2, m) && label[7] == '-' && parse_digits(label, 8, 2, d) &&
               label[10] == 'T' && parse_digits(label, 11, 2, h) && h < 24) {
        g = Granularity::hour;
    } else {
        return fail();
    }
    year_month_day ymd{year{y} / month{static_cast<unsigned>(m)} / day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return fail();
    return Interval{g, Instant{days_since_epoch(y, m, d) * kSecondsPerDay + h * 3600}};
}

std::vector<Interval> child_intervals(const Interval& outer) {
    Granularity finer = Granularity::hour;
    switch (outer.granularity) {
        case Granularity::hour: return {};
        case Granularity::day: finer = Granularity::hour; break;
        case Granularity::month: finer = Granularity::day; break;
        case Granularity::year: finer = Granularity::month; break;
    }
    std::vector<Interval> out;
    Interval cur{finer, outer.start};
    while (cur.start < outer.end()) {
        out.push_back(cur);
        cur = Interval{finer, cur.end()};
    }
    return out;
}

}  // namespace skg

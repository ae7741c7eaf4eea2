#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skg {

// A UTC instant at second resolution.
struct Instant {
    std::int64_t seconds = 0;

    auto operator<=>(const Instant&) const = default;
};

// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing 'Z' or "+00:00".
// Throws ValidationError on anything else.
Instant parse_iso8601(std::string_view text);
std::string format_iso8601(Instant t);

enum class Granularity { hour, day, month, year };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view text);

struct Interval {
    Granularity granularity = Granularity::hour;
    Instant start;

    Instant end() const;  // exclusive
    bool contains(Instant t) const { return start <= t && t < end(); }
    bool contains(const Interval& other) const {
        return start <= other.start && other.end() <= end();
    }
    std::int64_t length_seconds() const { return end().seconds - start.seconds; }

    // "2017-11-11T13", "2017-11-11", "2017-11", "2017".
    std::string label() const;
    Interval previous() const;

    auto operator<=>(const Interval&) const = default;
};

// Floors `t` to the interval of granularity `g` containing it.
Interval interval_containing(Granularity g, Instant t);

// Granularity is inferred from the label shape.
Interval parse_interval_label(std::string_view label);

// The finer intervals that tile `outer`, e.g. the 24 hours of a day.
std::vector<Interval> child_intervals(const Interval& outer);

}  // namespace skg

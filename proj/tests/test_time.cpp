#include "skg/error.hpp"
#include "skg/time.hpp"

#include <doctest.h>

using namespace skg;

TEST_CASE("iso8601 parse and format") {
    Instant t = parse_iso8601("2017-11-11T13:05:09Z");
    CHECK(format_iso8601(t) == "2017-11-11T13:05:09Z");
    CHECK(parse_iso8601("2017-11-11T13:05:09+00:00") == t);
    CHECK(parse_iso8601("2017-11-11T13:05:09") == t);
    CHECK(parse_iso8601("1970-01-01T00:00:00Z").seconds == 0);
    CHECK(parse_iso8601("2017-11-11 13:05:09") == t);
    CHECK_THROWS_AS(parse_iso8601("2017-11-11/13:05:09"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("2017-13-11T13:05:09Z"), ValidationError);
    CHECK_THROWS_AS(parse_iso8601("2017-11-11T13:05:09+02:00"), ValidationError);
}

TEST_CASE("interval labels") {
    for (const char* label : {"2017-11-11T13", "2017-11-11", "2017-11", "2017"}) {
        CHECK(parse_interval_label(label).label() == label);
    }
    CHECK(parse_interval_label("2017-11-11T13").granularity == Granularity::hour);
    CHECK(parse_interval_label("2017").granularity == Granularity::year);
    CHECK_THROWS_AS(parse_interval_label("2017-11-11T24"), ValidationError);
    CHECK_THROWS_AS(parse_interval_label("yesterday"), ValidationError);
}

TEST_CASE("interval arithmetic") {
    Interval day = parse_interval_label("2017-11-11");
    CHECK(day.length_seconds() == 86400);
    CHECK(child_intervals(day).size() == 24);
    CHECK(child_intervals(parse_interval_label("2017-11")).size() == 30);
    CHECK(child_intervals(parse_interval_label("2016-02")).size() == 29);
    CHECK(child_intervals(parse_interval_label("2017")).size() == 12);
    CHECK(child_intervals(parse_interval_label("2017-11-11T13")).empty());
    CHECK(parse_interval_label("2017-01").previous().label() == "2016-12");
    CHECK(parse_interval_label("2017-11-11T00").previous().label() == "2017-11-10T23");
    Interval h = interval_containing(Granularity::hour, parse_iso8601("2017-11-11T13:59:59Z"));
    CHECK(h.label() == "2017-11-11T13");
    CHECK(day.contains(h));
    CHECK_FALSE(h.contains(day));
    CHECK(h.contains(parse_iso8601("2017-11-11T13:00:00Z")));
    CHECK_FALSE(h.contains(parse_iso8601("2017-11-11T14:00:00Z")));
}

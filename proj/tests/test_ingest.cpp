#include "oracles.hpp"

#include "skg/error.hpp"
#include "skg/ingest.hpp"

#include <doctest.h>

#include <sstream>

using namespace skg;

namespace {

UserProfile user(const std::string& id, bool verified = true) {
    UserProfile u;
    u.user_id = id;
    u.screen_name = id;
    u.verified = verified;
    u.authority_score = 0.5;
    u.followers_count = 100;
    return u;
}

Post post(const std::string& id, const std::string& author) {
    Post p;
    p.post_id = id;
    p.author_id = author;
    p.timestamp = parse_iso8601("2017-11-11T13:00:00Z");
    p.text = "hello";
    return p;
}

}  // namespace

TEST_CASE("parse posts") {
    SUBCASE("empty stream") {
        std::istringstream in("");
        auto r = parse_posts(in);
        CHECK(r.records.empty());
        CHECK(r.skipped == 0);
    }
    SUBCASE("order preserved, missing mandatory field skipped") {
        std::istringstream in(
            R"({"post_id":"a","author_id":"u","timestamp":"2017-11-11T13:00:00Z","text":"one"})"
            "\n"
            R"({"author_id":"u","timestamp":"2017-11-11T13:00:01Z","text":"no id"})"
            "\n\n"
            R"({"post_id":"b","author_id":"u","timestamp":"2017-11-11T13:00:02Z","text":"two","extra":1,)"
            R"("link_urls":["HTTP://Example.COM/x/#frag"],"mentioned_user_ids":["v"],"retweet_count":3})"
            "\n");
        auto r = parse_posts(in);
        REQUIRE(r.records.size() == 2);
        CHECK(r.skipped == 1);
        CHECK(r.records[0].post_id == "a");
        CHECK(r.records[1].post_id == "b");
        CHECK(r.records[1].link_urls == std::vector<std::string>{"http://example.com/x"});
        CHECK(r.records[1].retweet_count == 3);
    }
    SUBCASE("invalid records") {
        std::istringstream in(
            "not json\n"
            R"({"post_id":"a","author_id":"u","timestamp":"2017-11-11T13:00:00Z","text":"x","spam_score":1.5})"
            "\n"
            R"({"post_id":"b","author_id":"u","timestamp":"2017-11-11T13:00:00Z","text":"x","retweet_of_post_id":"b"})"
            "\n"
            R"({"post_id":"c","author_id":"u","timestamp":"2017-11-11T13:00:00Z","text":"x"})"
            "\n"
            R"({"post_id":"c","author_id":"u","timestamp":"2017-11-11T13:00:00Z","text":"dup"})"
            "\n");
        auto r = parse_posts(in);
        CHECK(r.records.size() == 1);
        CHECK(r.skipped == 4);
    }
}

TEST_CASE("parse users and links") {
    std::istringstream users(
        R"({"user_id":"u1","screen_name":"a","display_name":"A","verified":true,"protected":true,)"
        R"("followers_count":5,"authority_score":0.9,"spam_score":0,"adult_score":0})"
        "\n"
        R"({"screen_name":"b"})"
        "\n");
    auto u = parse_users(users);
    REQUIRE(u.records.size() == 1);
    CHECK(u.skipped == 1);
    CHECK(u.records[0].is_protected);
    CHECK(u.records[0].verified);

    std::istringstream links(R"({"url":"https://News.Example.com/a/","title":"T","spam_score":0.1})"
                             "\n");
    auto l = parse_links(links);
    REQUIRE(l.records.size() == 1);
    CHECK(l.records[0].url == "https://news.example.com/a");
    CHECK(l.records[0].title == "T");
    CHECK_FALSE(l.records[0].description.has_value());
}

TEST_CASE("url canonicalization") {
    CHECK(canonicalize_url("HTTPS://Example.COM/Path/?q=1#top") == "https://example.com/Path?q=1");
    CHECK(canonicalize_url("http://example.com/") == "http://example.com");
    CHECK(canonicalize_url("http://example.com/a?x=Y") == "http://example.com/a?x=Y");
}

TEST_CASE("missing input file is an io error") {
    CHECK_THROWS_AS(load_posts("/nonexistent/posts.jsonl"), IoError);
}

TEST_CASE("select_users") {
    FilterThresholds t;
    t.min_user_authority = 0.3;
    t.min_followers = 10;
    UserMap users;
    auto add = [&](UserProfile u) { users[u.user_id] = u; };
    add(user("ok"));
    auto p = user("protected");
    p.is_protected = true;
    add(p);
    add(user("plain", false));
    auto weak = user("weak");
    weak.authority_score = 0.1;
    add(weak);
    auto adult = user("adult");
    adult.adult_score = 0.9;
    add(adult);
    auto small = user("small");
    small.followers_count = 2;
    add(small);
    add(user("trusted", false));

    std::set<std::string> trusted{"trusted"};
    auto selected = select_users(users, trusted, t);
    CHECK(selected == std::set<std::string>{"ok", "trusted"});

    std::set<std::string> brute;
    for (const auto& [id, u] : users) {
        Post probe = post("x", id);
        if (oracle::post_passes(probe, users, {}, t, trusted)) brute.insert(id);
    }
    CHECK(selected == brute);
}

TEST_CASE("filter_posts against predicate oracle") {
    FilterThresholds t;
    UserMap users;
    users["v"] = user("v");
    users["n"] = user("n", false);
    LinkMap links;
    links["http://spam.example"] = LinkMetadata{"http://spam.example", {}, {}, 0.9, 0.0};
    links["http://adult.example"] = LinkMetadata{"http://adult.example", {}, {}, 0.0, 0.8};
    links["http://fine.example"] = LinkMetadata{"http://fine.example", {}, {}, 0.1, 0.1};

    std::vector<Post> posts;
    for (int i = 0; i < 10; ++i) posts.push_back(post("p" + std::to_string(i), "v"));
    posts[1].spam_score = 1.0;
    posts[2].adult_score = 0.6;
    posts[3].profanity_score = 0.51;
    posts[4].link_urls = {"http://spam.example"};
    posts[5].link_urls = {"http://adult.example"};
    posts[6].link_urls = {"http://fine.example", "http://unknown.example"};
    posts[7].author_id = "n";
    posts[8].author_id = "ghost";
    posts[9].spam_score = 0.5;

    auto kept = filter_posts(posts, users, links, t);
    std::vector<std::string> ids;
    for (const auto& p : kept) ids.push_back(p.post_id);
    CHECK(ids == std::vector<std::string>{"p0", "p6", "p9"});

    std::vector<std::string> brute;
    for (const auto& p : posts)
        if (oracle::post_passes(p, users, links, t, {})) brute.push_back(p.post_id);
    CHECK(ids == brute);

    SUBCASE("trusted author admitted") {
        auto with_trust = filter_posts(posts, users, links, t, {"n"});
        CHECK(with_trust.size() == 4);
    }
    SUBCASE("idempotent") { CHECK(filter_posts(kept, users, links, t) == kept); }
    SUBCASE("tightening never enlarges") {
        FilterThresholds tight = t;
        tight.max_spam = 0.05;
        auto fewer = filter_posts(posts, users, links, tight);
        CHECK(fewer.size() <= kept.size());
        for (const auto& p : fewer) CHECK(std::find(kept.begin(), kept.end(), p) != kept.end());
    }
}

TEST_CASE("threshold validation") {
    FilterThresholds t;
    CHECK_NOTHROW(t.validate());
    t.max_spam = 1.5;
    CHECK_THROWS_AS(t.validate(), ValidationError);
}

#include "fixtures.hpp"
#include "oracles.hpp"

#include "skg/config.hpp"
#include "skg/error.hpp"
#include "skg/pipeline.hpp"
#include "skg/snapshot_io.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace skg;
using fixture::post;
using fixture::user;

TEST_CASE("config parsing") {
    std::istringstream in(
        "# thresholds\n"
        "filter.max_spam = 0.3\n"
        "links.k_popular=7   # inline comment\n"
        "prune.min.topic:hashtag = 4\n"
        "prune.exponent = 1\n"
        "\n");
    auto c = parse_config(in);
    CHECK(c.filter.max_spam == 0.3);
    CHECK(c.links.k_popular == 7);
    CHECK(c.prune.base.at("topic:hashtag") == 4.0);
    CHECK(c.prune.exponent == 1.0);

    std::istringstream unknown("nope = 1\n");
    CHECK_THROWS_AS(parse_config(unknown), ValidationError);
    std::istringstream bad_value("posts.k = many\n");
    CHECK_THROWS_AS(parse_config(bad_value), ValidationError);
    std::istringstream out_of_range("fan.top_fraction = 2\n");
    CHECK_THROWS_AS(parse_config(out_of_range), ValidationError);
    std::istringstream no_equals("posts.k 5\n");
    CHECK_THROWS_AS(parse_config(no_equals), ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent.conf"), IoError);
}

TEST_CASE("prune threshold lookup") {
    PruneThresholds t;
    t.base = {{"topic", 2.0}, {"topic:hashtag", 5.0}, {"users_topics", 3.0}};
    Interval hour = parse_interval_label("2017-11-11T13");
    Interval day = parse_interval_label("2017-11-11");
    CHECK(t.multiplier(hour) == 1.0);
    CHECK(t.multiplier(day) == doctest::Approx(std::pow(24.0, 0.8)));
    CHECK(t.threshold("topic:hashtag", hour) == 5.0);
    CHECK(t.threshold("topic:ngram", hour) == 2.0);
    CHECK(t.threshold("users_topics:authored", day) == doctest::Approx(3.0 * std::pow(24.0, 0.8)));
    CHECK(t.threshold("link", day) == 0.0);
}

TEST_CASE("advance_history") {
    TrendHistory prev{{"a", {1, 2}}, {"gone", {0, 0, 3}}, {"zero", {0}}};
    auto next = advance_history(prev, {{"a", 5}, {"new", 2}}, 3);
    CHECK(next.at("a") == std::vector<double>{1, 2, 5});
    CHECK(next.at("gone") == std::vector<double>{0, 3, 0});
    CHECK(next.at("new") == std::vector<double>{2});
    CHECK_FALSE(next.contains("zero"));
    auto later = advance_history(next, {}, 3);
    CHECK(later.at("gone") == std::vector<double>{3, 0, 0});
    CHECK_FALSE(advance_history(later, {}, 3).contains("gone"));
}

TEST_CASE("build on a hand corpus") {
    auto a = post("p1", "a", "Tax reform passes #taxbill http://news.example/1", "2017-11-11T13:01:00Z");
    a.link_urls = {"http://news.example/1"};
    a.mentioned_user_ids = {"b"};
    auto b = post("p2", "b", "@a_sn tax reform looks good #taxbill", "2017-11-11T13:05:00Z");
    b.mentioned_user_ids = {"a"};
    auto c = post("p3", "c", "RT @a_sn: Tax reform passes #taxbill http://news.example/1", "2017-11-11T13:06:00Z");
    c.retweet_of_post_id = "p1";
    c.retweet_of_user_id = "a";
    c.link_urls = {"http://news.example/1"};
    auto outside = post("p4", "a", "next hour #later", "2017-11-11T14:00:00Z");
    auto spam = post("p5", "a", "buy now #deal", "2017-11-11T13:07:00Z");
    spam.spam_score = 0.9;
    auto stranger = post("p6", "z", "hello #taxbill", "2017-11-11T13:08:00Z");

    auto in = fixture::inputs({a, b, c, outside, spam, stranger},
                              {user("a"), user("b", false), user("c"), user("z", false)});
    // b earns trust: a mentioned b before b replied.
    auto s = build_snapshot(in, parse_interval_label("2017-11-11T13"), PipelineConfig{}, BuildResources{});

    CHECK(validate_snapshot(s).empty());
    CHECK(s.users.size() == 3);
    CHECK(s.users.at("b").trusted_ring == 1);
    CHECK_FALSE(s.users.contains("z"));
    CHECK(s.posts.contains("p1"));
    CHECK_FALSE(s.posts.contains("p4"));
    CHECK_FALSE(s.posts.contains("p5"));
    CHECK_FALSE(s.posts.contains("p6"));

    const auto& link = s.links.at("http://news.example/1");
    CHECK(link.popularity == 2);
    CHECK(link.virality == doctest::Approx(1.0));
    CHECK_FALSE(link.social_signature.terms.empty());
    CHECK(s.topics.at("hashtag:#taxbill").frequency == 3);
    CHECK(s.topics.at("hashtag:#taxbill").contextual_vector.has_value());
    CHECK_FALSE(s.topics.at("ngram:tax reform").contextual_vector.has_value());
    CHECK(s.topic_index.at("reform").contains("ngram:tax reform"));
    CHECK(s.trend_history.at("link:http://news.example/1") == std::vector<double>{2});

    auto rt = s.table(Table::users_users).find(ConnectionKey{"c", "a", Relation::retweeted});
    REQUIRE(rt != s.table(Table::users_users).end());
    CHECK(rt->second.score == 1.0);
    CHECK(s.table(Table::users_users).contains(ConnectionKey{"a", "b", Relation::mentioned}));
    CHECK(s.table(Table::users_links).contains(ConnectionKey{"b", "http://news.example/1", Relation::coreferenced}));
    CHECK(s.manifest.counts.at("users") == 3);
    CHECK(s.manifest.parameters.at("inputs").at("retained_posts") == 3);

    SUBCASE("rebuild is identical and survives the disk") {
        fixture::TempDir dir("skg_pipeline");
        write_snapshot(s, dir.path());
        auto again = build_snapshot(in, s.interval, PipelineConfig{}, BuildResources{});
        CHECK(again == s);
        CHECK(read_snapshot(dir.path(), s.interval) == s);
    }
}

TEST_CASE("trending topics use the previous interval") {
    std::vector<Post> posts;
    std::vector<UserProfile> users;
    for (int i = 0; i < 6; ++i) {
        std::string id = "u" + std::to_string(i);
        users.push_back(user(id));
        posts.push_back(post("p" + std::to_string(i), id, "#rising and #steady", "2017-11-11T13:20:00Z"));
    }
    PipelineConfig config;
    config.topics.k_popular_per_type = 0;
    TrendHistory previous{{"hashtag:#rising", {1, 1, 2}}, {"hashtag:#steady", {6, 6, 6}}};
    auto s = build_snapshot(fixture::inputs(posts, users), parse_interval_label("2017-11-11T13"), config,
                            BuildResources{}, previous);
    REQUIRE(s.topics.contains("hashtag:#rising"));
    CHECK(s.topics.at("hashtag:#rising").trending > 5.0);
    CHECK_FALSE(s.topics.contains("hashtag:#steady"));
    CHECK(s.trend_history.at("hashtag:#steady") == std::vector<double>{6, 6, 6, 6});
}

TEST_CASE("corpus build connection scores match the distinct-author oracle") {
    auto corpus = generate_corpus(fixture::small_spec());
    auto in = fixture::corpus_inputs(corpus);
    Interval hour = parse_interval_label("2017-11-11T13");
    auto s = build_snapshot(in, hour, PipelineConfig{}, BuildResources{});
    CHECK(validate_snapshot(s).empty());

    std::set<std::string> seeds;
    for (const auto& u : corpus.users)
        if (u.verified) seeds.insert(u.user_id);
    auto rings = oracle::trust_rings(seeds, build_interactions(corpus.posts), 10);
    std::set<std::string> trusted;
    for (const auto& [u, r] : rings) trusted.insert(u);
    std::vector<Post> retained;
    for (const auto& p : corpus.posts)
        if (hour.contains(p.timestamp) && oracle::post_passes(p, in.users, in.links, FilterThresholds{}, trusted))
            retained.push_back(p);
    CHECK(s.manifest.parameters.at("inputs").at("retained_posts") == retained.size());

    std::vector<std::vector<Topic>> topics;
    for (const auto& p : retained) topics.push_back(extract_topics(p.text, StopWords::english(), Gazetteer::demo()));
    auto brute = oracle::connection_authors(retained, topics, s);
    for (Table t : all_tables()) {
        if (table_info(t).right == NodeKind::post) continue;
        for (const auto& [key, row] : s.table(t)) {
            if (key.relation == Relation::fanOrAuthority) continue;
            auto it = brute.find({t, key});
            REQUIRE(it != brute.end());
            CHECK(row.score == static_cast<double>(it->second.size()));
        }
    }
}

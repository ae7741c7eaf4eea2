#include "fixtures.hpp"

#include "skg/error.hpp"
#include "skg/pipeline.hpp"
#include "skg/service.hpp"
#include "skg/snapshot_io.hpp"

#include <doctest.h>
#include <httplib.h>

#include <fstream>
#include <thread>

using namespace skg;
using nlohmann::json;

namespace {

GraphSnapshot hand_snapshot() {
    std::vector<Post> posts;
    std::vector<UserProfile> users;
    const char* texts[] = {
        "Barack Obama speaks on tax reform #obama",
        "obama tax plan http://news.example/tax",
        "senate vote on tax reform #tax",
        "Obama library opens in Chicago",
        "watching the game tonight #sports",
    };
    for (int i = 0; i < 5; ++i) {
        std::string id = "u" + std::to_string(i);
        users.push_back(fixture::user(id));
        auto p = fixture::post("p" + std::to_string(i), id, texts[i], "2017-11-11T13:1" + std::to_string(i) + ":00Z");
        if (i == 1) p.link_urls = {"http://news.example/tax"};
        posts.push_back(p);
    }
    auto in = fixture::inputs(posts, users);
    LinkMetadata meta;
    meta.url = "http://news.example/tax";
    meta.title = "Obama tax plan explained";
    in.links[meta.url] = meta;
    return build_snapshot(in, parse_interval_label("2017-11-11T13"), PipelineConfig{}, BuildResources{});
}

std::multimap<std::string, std::string> params(std::initializer_list<std::pair<const std::string, std::string>> kv) {
    return {kv};
}

std::vector<std::string> words_of(const std::string& text) { return word_tokens(text); }

bool has_all(const std::vector<std::string>& words, const std::vector<std::string>& tokens) {
    for (const auto& t : tokens)
        if (std::find(words.begin(), words.end(), t) == words.end()) return false;
    return true;
}

// Scans every node and keeps those whose text holds all tokens.
std::vector<std::pair<std::string, std::string>> brute_search(const GraphSnapshot& s,
                                                               const std::vector<std::string>& tokens,
                                                               std::size_t limit) {
    struct Row {
        double score;
        int kind;
        std::string kind_name, id;
    };
    std::vector<Row> rows;
    for (const auto& [id, u] : s.users)
        if (has_all(words_of(u.screen_name + " " + u.display_name), tokens))
            rows.push_back({u.main_score, static_cast<int>(NodeKind::user), "user", id});
    for (const auto& [id, l] : s.links)
        if (l.title && has_all(words_of(*l.title), tokens))
            rows.push_back({l.main_score, static_cast<int>(NodeKind::link), "link", id});
    for (const auto& [id, t] : s.topics)
        if (has_all(words_of(t.topic.text), tokens))
            rows.push_back({t.main_score, static_cast<int>(NodeKind::topic), "topic", id});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.id < b.id;
    });
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < rows.size() && i < limit; ++i) out.emplace_back(rows[i].kind_name, rows[i].id);
    return out;
}

std::vector<std::pair<std::string, std::string>> result_ids(const json& body) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& r : body.at("results")) out.emplace_back(r.at("kind"), r.at("id"));
    return out;
}

}  // namespace

TEST_CASE("list_snapshots") {
    fixture::TempDir dir("skg_service_list");
    CHECK(list_snapshots(dir.path()).empty());
    CHECK_THROWS_AS(list_snapshots(dir.path() / "missing"), IoError);

    auto s = hand_snapshot();
    write_snapshot(s, dir.path());
    std::filesystem::create_directories(dir.path() / "day" / "2017-11-12");
    std::ofstream(dir.path() / "day" / "2017-11-12" / "manifest.json") << "{not json";
    std::filesystem::create_directories(dir.path() / "day" / "scratch.tmp");

    auto listing = list_snapshots(dir.path());
    REQUIRE(listing.size() == 2);
    CHECK(listing[0].granularity == Granularity::hour);
    CHECK(listing[0].ok);
    CHECK(listing[0].summary.at("counts").at("users") == 5);
    CHECK(listing[1].label == "2017-11-12");
    CHECK_FALSE(listing[1].ok);
}

TEST_CASE("snapshot store") {
    fixture::TempDir dir("skg_service_store");
    auto s = hand_snapshot();
    write_snapshot(s, dir.path());
    SnapshotStore store(dir.path(), 1);
    Interval hour = s.interval;

    std::vector<std::thread> threads;
    std::vector<std::shared_ptr<const LoadedSnapshot>> got(8);
    for (int i = 0; i < 8; ++i) threads.emplace_back([&, i] { got[i] = store.get(hour); });
    for (auto& t : threads) t.join();
    CHECK(store.loads() == 1);
    for (const auto& g : got) CHECK(g.get() == got[0].get());
    CHECK(got[0]->snapshot == s);

    CHECK_THROWS_AS(store.get(parse_interval_label("2017-11-11T14")), NotFoundError);
    CHECK(store.get(hour).get() == got[0].get());
    CHECK(store.loads() == 2);
    CHECK_THROWS_AS(SnapshotStore(dir.path(), 0), ValidationError);
}

TEST_CASE("query parameters") {
    auto req = parse_query_request(params({{"q", "tax"}, {"interval", "2017-11-11T13"},
                                           {"filter_kinds", "topic,user"}, {"topic_types", "hashtag"},
                                           {"limit", "7"}}));
    CHECK(req.q == std::optional<std::string>("tax"));
    CHECK(req.filter_kinds->size() == 2);
    CHECK(req.topic_types->contains(TopicType::hashtag));
    CHECK(req.limit == 7);
    auto node = parse_query_request(params({{"node", "link:http://a/b"}, {"interval", "2017-11-11"}}));
    CHECK(node.node->first == NodeKind::link);
    CHECK(node.node->second == "http://a/b");

    auto field_of = [](std::initializer_list<std::pair<const std::string, std::string>> kv) {
        try {
            parse_query_request(params(kv));
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("none");
    };
    CHECK(field_of({{"interval", "2017-11-11T13"}}) == "q");
    CHECK(field_of({{"q", "tax"}}) == "interval");
    CHECK(field_of({{"q", "tax"}, {"interval", "someday"}}) == "interval");
    CHECK(field_of({{"q", "tax"}, {"interval", "2017-11-11"}, {"granularity", "hour"}}) == "granularity");
    CHECK(field_of({{"q", "tax"}, {"interval", "2017-11-11"}, {"limit", "0"}}) == "limit");
    CHECK(field_of({{"q", "tax"}, {"interval", "2017-11-11"}, {"limit", "201"}}) == "limit");
    CHECK(field_of({{"q", "tax"}, {"interval", "2017-11-11"}, {"filter_kinds", "planet"}}) == "filter_kinds");
    CHECK(field_of({{"q", "tax"}, {"interval", "2017-11-11"}, {"topic_types", "mood"}}) == "topic_types");
    CHECK(field_of({{"node", "tax"}, {"interval", "2017-11-11"}}) == "node");
}

TEST_CASE("search, node and timeline") {
    fixture::TempDir dir("skg_service_query");
    auto s = hand_snapshot();
    write_snapshot(s, dir.path());
    SnapshotStore store(dir.path());
    QueryService service(store);
    Interval hour = s.interval;

    SUBCASE("search agrees with a full scan") {
        for (const char* q : {"obama", "tax", "tax reform", "barack obama", "chicago", "nothing here"}) {
            for (std::size_t limit : {1, 3, 25}) {
                QueryRequest req;
                req.q = q;
                req.interval = hour;
                req.limit = limit;
                auto body = service.search(req);
                CAPTURE(q);
                CHECK(result_ids(body) == brute_search(s, word_tokens(q), limit));
                CHECK(body.at("results").size() <= limit);
            }
        }
        QueryRequest req;
        req.q = "obama";
        req.interval = hour;
        auto body = service.search(req);
        auto ids = result_ids(body);
        CHECK(std::find(ids.begin(), ids.end(), std::pair<std::string, std::string>{"topic", "entity:barack obama"}) !=
              ids.end());
        CHECK(std::find(ids.begin(), ids.end(),
                        std::pair<std::string, std::string>{"link", "http://news.example/tax"}) != ids.end());
        for (std::size_t i = 1; i < body.at("results").size(); ++i)
            CHECK(body["results"][i - 1]["main_score"].get<double>() >= body["results"][i]["main_score"].get<double>());

        req.filter_kinds = std::set<NodeKind>{NodeKind::topic};
        req.topic_types = std::set<TopicType>{TopicType::hashtag};
        for (const auto& r : service.search(req).at("results")) {
            CHECK(r.at("kind") == "topic");
            CHECK(r.at("topic_type") == "hashtag");
        }
    }

    SUBCASE("node neighbourhood") {
        auto body = service.node(NodeKind::topic, "hashtag:#obama", hour);
        CHECK(body.at("record").at("frequency") == 1);
        CHECK(body.at("connections").contains("user/authored"));
        CHECK(body.at("connections").at("user/authored")[0].at("id") == "u0");
        REQUIRE(body.at("supporting_posts").size() == 1);
        CHECK(body.at("supporting_posts")[0].at("post_id") == "p0");
        CHECK_THROWS_AS(service.node(NodeKind::user, "nobody", hour), NotFoundError);

        QueryRequest req;
        req.node = {NodeKind::link, "http://news.example/tax"};
        req.interval = hour;
        auto near = result_ids(service.search(req));
        CHECK(std::find(near.begin(), near.end(), std::pair<std::string, std::string>{"user", "u1"}) != near.end());
    }

    SUBCASE("timeline fills gaps with zeros") {
        auto body = service.timeline("hashtag:#tax", parse_interval_label("2017-11-11T12"),
                                     parse_interval_label("2017-11-11T14"));
        REQUIRE(body.at("points").size() == 3);
        CHECK(body["points"][0]["frequency"] == 0);
        CHECK(body["points"][1]["frequency"] == 1);
        CHECK(body["points"][2]["frequency"] == 0);
        CHECK(body["points"][1]["interval"] == "2017-11-11T13");
        auto months = service.timeline("hashtag:#tax", parse_interval_label("2017-01"), parse_interval_label("2017-12"));
        CHECK(months.at("points").size() == 12);
        CHECK(months["points"][1]["interval"] == "2017-02");
        CHECK_THROWS_AS(service.timeline("hashtag:#tax", parse_interval_label("2017-11-11"),
                                         parse_interval_label("2017-11-11T13")),
                        ValidationError);
        CHECK_THROWS_AS(service.timeline("hashtag:#tax", parse_interval_label("2017-11-11T13"),
                                         parse_interval_label("2017-11-11T12")),
                        ValidationError);
    }
}

TEST_CASE("http routes") {
    fixture::TempDir dir("skg_service_http");
    auto s = hand_snapshot();
    write_snapshot(s, dir.path());
    SnapshotStore store(dir.path());
    QueryService service(store);
    httplib::Server server;
    register_routes(server, service, ServerOptions{"http://localhost:5173"});
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto get = [&](const std::string& path) {
        auto res = client.Get(path);
        REQUIRE(res);
        return std::make_pair(res->status, json::parse(res->body));
    };

    auto snaps = client.Get("/snapshots");
    REQUIRE(snaps);
    CHECK(snaps->status == 200);
    CHECK(snaps->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    CHECK(json::parse(snaps->body).at("snapshots").size() == 1);

    auto [status, body] = get("/search?q=obama&interval=2017-11-11T13&limit=3");
    CHECK(status == 200);
    CHECK(body.at("results").size() == 3);
    CHECK(body == get("/search?q=obama&interval=2017-11-11T13&limit=3").second);

    auto [link_status, link_body] = get("/node/link/" + std::string("http%3A%2F%2Fnews.example%2Ftax") +
                                        "?interval=2017-11-11T13");
    CHECK(link_status == 200);
    CHECK(link_body.at("id") == "http://news.example/tax");

    CHECK(get("/node/topic/hashtag:%23tax?interval=2017-11-11T13").first == 200);
    CHECK(get("/node/user/nobody?interval=2017-11-11T13").first == 404);
    CHECK(get("/node/planet/x?interval=2017-11-11T13").first == 400);
    CHECK(get("/search?q=obama&interval=2017-11-11T15").first == 404);
    auto [bad_status, bad_body] = get("/search?q=obama&interval=2017-11-11T13&limit=-1");
    CHECK(bad_status == 400);
    CHECK(bad_body.at("field") == "limit");
    CHECK(get("/timeline?topic=hashtag:%23tax&from=2017-11-11T12&to=2017-11-11T14").second.at("points").size() == 3);
    CHECK(get("/timeline?from=2017-11-11T12&to=2017-11-11T14").first == 400);

    server.stop();
    loop.join();
}

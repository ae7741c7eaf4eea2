#include "oracles.hpp"

#include "skg/error.hpp"
#include "skg/trust.hpp"

#include <doctest.h>

#include <random>

using namespace skg;

namespace {

InteractionEdge edge(const std::string& a, const std::string& b, std::int64_t t) {
    return InteractionEdge{a, b, Instant{t}, a + b + std::to_string(t)};
}

}  // namespace

TEST_CASE("build_interactions") {
    Post p;
    p.post_id = "p1";
    p.author_id = "A";
    p.mentioned_user_ids = {"B", "C", "A"};
    p.reply_to_user_id = "D";
    Post quiet;
    quiet.post_id = "p2";
    quiet.author_id = "A";
    Post rt;
    rt.post_id = "p3";
    rt.author_id = "B";
    rt.retweet_of_post_id = "p1";
    rt.retweet_of_user_id = "A";
    auto edges = build_interactions({p, quiet, rt});
    REQUIRE(edges.size() == 3);
    CHECK(edges[0].to_user == "B");
    CHECK(edges[1].to_user == "C");
    CHECK(edges[2].to_user == "D");
    for (const auto& e : edges) CHECK(e.from_user == "A");
}

TEST_CASE("expand_trusted small cases") {
    SUBCASE("no seeds") {
        auto r = expand_trusted({}, {edge("V", "A", 1), edge("A", "V", 2)});
        CHECK(r.trusted.empty());
        CHECK(r.iterations_run == 1);
    }
    SUBCASE("initiated exchange") {
        auto r = expand_trusted({"V"}, {edge("V", "A", 1), edge("A", "V", 2), edge("B", "V", 3)});
        CHECK(r.trusted == std::set<std::string>{"V", "A"});
        CHECK(r.ring.at("V") == 0);
        CHECK(r.ring.at("A") == 1);
    }
    SUBCASE("direction matters") {
        auto r = expand_trusted({"V"}, {edge("V", "A", 2), edge("A", "V", 1)});
        CHECK(r.trusted == std::set<std::string>{"V"});
    }
    SUBCASE("equal timestamps do not qualify") {
        auto r = expand_trusted({"V"}, {edge("V", "A", 5), edge("A", "V", 5)});
        CHECK(r.trusted.size() == 1);
    }
    SUBCASE("chain") {
        auto r = expand_trusted({"V"}, {edge("V", "A", 1), edge("A", "V", 2), edge("A", "B", 3), edge("B", "A", 4)});
        CHECK(r.ring.at("B") == 2);
        CHECK(r.iterations_run == 3);
    }
    SUBCASE("iteration cap") {
        std::vector<InteractionEdge> edges;
        for (int i = 0; i < 20; ++i) {
            auto a = "u" + std::to_string(i), b = "u" + std::to_string(i + 1);
            edges.push_back(edge(a, b, 2 * i));
            edges.push_back(edge(b, a, 2 * i + 1));
        }
        auto r = expand_trusted({"u0"}, edges, 10);
        CHECK(r.iterations_run == 10);
        CHECK(r.trusted.size() == 11);
        CHECK_THROWS_AS(expand_trusted({"u0"}, edges, 0), ValidationError);
    }
}

TEST_CASE("expand_trusted matches brute-force BFS on random graphs") {
    std::mt19937_64 rng(7);
    for (int g = 0; g < 30; ++g) {
        int users = 5 + static_cast<int>(rng() % 60);
        int m = static_cast<int>(rng() % (users * 4));
        std::vector<InteractionEdge> edges;
        for (int i = 0; i < m; ++i) {
            auto a = "u" + std::to_string(rng() % users), b = "u" + std::to_string(rng() % users);
            if (a != b) edges.push_back(edge(a, b, static_cast<std::int64_t>(rng() % 50)));
        }
        std::set<std::string> seeds{"u0", "u1"};
        auto r = expand_trusted(seeds, edges, 10);
        auto brute = oracle::trust_rings(seeds, edges, 10);
        CHECK(r.ring == brute);

        int deepest = 0;
        for (const auto& [u, ring] : r.ring) deepest = std::max(deepest, ring);
        if (deepest < 10) {
            auto again = expand_trusted(r.trusted, edges, 10);
            CHECK(again.trusted == r.trusted);
        }
        for (int k = 1; k < 10; ++k) {
            auto smaller = expand_trusted(seeds, edges, k);
            auto larger = expand_trusted(seeds, edges, k + 1);
            CHECK(std::includes(larger.trusted.begin(), larger.trusted.end(), smaller.trusted.begin(),
                                smaller.trusted.end()));
        }
    }
}

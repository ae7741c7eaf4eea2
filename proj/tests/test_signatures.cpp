#include "oracles.hpp"

#include "skg/signatures.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace skg;

namespace {

Post post(const std::string& id, const std::string& author, const std::string& text) {
    Post p;
    p.post_id = id;
    p.author_id = author;
    p.text = text;
    return p;
}

std::vector<const Post*> ptrs(const std::vector<Post>& posts) {
    std::vector<const Post*> out;
    for (const auto& p : posts) out.push_back(&p);
    return out;
}

}  // namespace

TEST_CASE("tfidf") {
    CHECK(tfidf(1, 5, 5) == 0.0);
    CHECK(tfidf(7, 7, 7) == 0.0);
    CHECK(tfidf(10, 2, 200) == doctest::Approx(15.2089).epsilon(1e-5));
    CHECK(std::abs(tfidf(10, 2, 200) - oracle::tfidf(10, 2, 200)) < 1e-12);
    CHECK_THROWS_AS(tfidf(0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(tfidf(1, 0, 1), std::domain_error);
    CHECK_THROWS_AS(tfidf(1, 3, 2), std::domain_error);
    for (std::uint64_t tf = 1; tf < 20; ++tf) CHECK(tfidf(tf + 1, 3, 50) >= tfidf(tf, 3, 50));
    for (std::uint64_t df = 1; df < 49; ++df) CHECK(tfidf(4, df + 1, 50) < tfidf(4, df, 50));
}

TEST_CASE("affinity") {
    CHECK(affinity(0, 10, 3, 50) == 0.0);
    CHECK(affinity(1, 10, 9, 99) == doctest::Approx(1.0));
    CHECK(affinity(5, 10, 9, 99) == doctest::Approx(5.0));
    CHECK_THROWS_AS(affinity(1, 0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(affinity(3, 2, 1, 1), std::domain_error);
}

TEST_CASE("social signature by hand") {
    auto stop = StopWords::english();
    std::vector<Post> corpus = {post("1", "a", "tax reform passes"), post("2", "b", "tax cuts"),
                                post("3", "c", "weather today"), post("4", "d", "reform now")};
    auto global = build_global_stats(corpus, stop);
    CHECK(global.documents == 4);
    CHECK(global.df.at("tax") == 2);

    std::vector<Post> local = {corpus[0]};
    SignatureParams params;
    auto sig = social_signature("http://l", ptrs(local), global, params, stop);
    CHECK(sig.key == "http://l");
    REQUIRE(sig.terms.size() == 6);

    auto expect = [&](const std::string& term) {
        double t = oracle::tfidf(1, static_cast<double>(global.df.at(term)), 4);
        double local_rate = 1.0 / 6.0;
        double global_rate = (static_cast<double>(global.occurrences.at(term)) + 1.0) /
                             (static_cast<double>(global.total_occurrences) + 1.0);
        return t + 0.5 * local_rate / global_rate;
    };
    bool saw_tax_reform = false;
    for (const auto& term : sig.terms) {
        CHECK(term.score == doctest::Approx(expect(term.term)).epsilon(1e-12));
        CHECK(term.score == doctest::Approx(params.weights.tfidf * term.components.at("tfidf") +
                                            params.weights.affinity * term.components.at("affinity")));
        saw_tax_reform |= term.term == "tax reform";
    }
    CHECK(saw_tax_reform);
    for (std::size_t i = 1; i < sig.terms.size(); ++i) CHECK_FALSE(ranks_before(sig.terms[i], sig.terms[i - 1]));
}

TEST_CASE("signature edge cases") {
    auto stop = StopWords::english();
    std::vector<Post> corpus = {post("1", "a", "tax reform passes"), post("2", "a", "tax reform passes"),
                                post("3", "b", "other words here")};
    auto global = build_global_stats(corpus, stop);
    SignatureParams params;
    CHECK(social_signature("u", {}, global, params, stop).terms.empty());

    SUBCASE("same author repeating identical text counts once") {
        auto one = social_signature("u", {&corpus[0]}, global, params, stop);
        auto two = social_signature("u", {&corpus[0], &corpus[1]}, global, params, stop);
        CHECK(one == two);
    }
    SUBCASE("cap and deterministic ties") {
        params.max_terms = 2;
        auto sig = social_signature("u", {&corpus[0]}, global, params, stop);
        CHECK(sig.terms.size() == 2);
    }
    SUBCASE("term absent from global statistics") {
        Post stranger = post("9", "z", "unseen words");
        CHECK_THROWS_AS(social_signature("u", {&stranger}, global, params, stop), std::invalid_argument);
    }
    SUBCASE("uniform weight scaling keeps the order") {
        auto base = social_signature("u", {&corpus[0], &corpus[2]}, global, params, stop);
        SignatureParams scaled = params;
        scaled.weights = {3.0, 1.5};
        auto big = social_signature("u", {&corpus[0], &corpus[2]}, global, scaled, stop);
        REQUIRE(base.terms.size() == big.terms.size());
        for (std::size_t i = 0; i < base.terms.size(); ++i) CHECK(base.terms[i].term == big.terms[i].term);
    }
}

TEST_CASE("contextual vector excludes its key") {
    auto stop = StopWords::english();
    std::vector<Post> corpus = {post("1", "a", "#tax reform now"), post("2", "b", "reform vote #tax"),
                                post("3", "c", "unrelated chatter")};
    auto global = build_global_stats(corpus, stop);
    Topic tax{TopicType::hashtag, "#tax", std::nullopt};
    SignatureParams params;
    CHECK(contextual_vector(tax, {}, global, params, stop).terms.empty());
    auto v = contextual_vector(tax, {&corpus[0], &corpus[1]}, global, params, stop);
    CHECK(v.key == "hashtag:#tax");
    CHECK_FALSE(v.terms.empty());
    for (const auto& t : v.terms) CHECK(t.term != "tax");
    CHECK(std::any_of(v.terms.begin(), v.terms.end(), [](const ScoredTerm& t) { return t.term == "reform"; }));

    params.weights = {2.0, 0.0};
    auto tfidf_only = contextual_vector(tax, {&corpus[0], &corpus[1]}, global, params, stop);
    params.weights = {1.0, 0.0};
    auto tfidf_unit = contextual_vector(tax, {&corpus[0], &corpus[1]}, global, params, stop);
    REQUIRE(tfidf_only.terms.size() == tfidf_unit.terms.size());
    for (std::size_t i = 0; i < tfidf_only.terms.size(); ++i)
        CHECK(tfidf_only.terms[i].term == tfidf_unit.terms[i].term);
}

#pragma once

#include "skg/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace skg {

// Parameters of the synthetic post stream used for demos and tests.
struct CorpusSpec {
    std::uint64_t seed = 2017;
    std::size_t users = 500;
    std::size_t verified = 25;
    std::size_t posts = 10000;
    Instant start = Instant{1510401600};  // 2017-11-11T12:00:00Z
    std::size_t hours = 3;
    std::size_t links = 200;
};

struct Corpus {
    std::vector<Post> posts;  // chronological
    std::vector<UserProfile> users;
    std::vector<LinkMetadata> links;
};

// Deterministic for a given spec. Topics revolve around a handful of themes
// (tax reform, technology, sports, a former president); the first hour carries
// a short-lived "#flashsale" burst; a few posts and links are spam or adult.
Corpus generate_corpus(const CorpusSpec& spec = {});

// Writes posts.jsonl, users.jsonl and links.jsonl into `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace skg

#pragma once

#include "skg/corpus.hpp"
#include "skg/ingest.hpp"
#include "skg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace fixture {

inline skg::Post post(const std::string& id, const std::string& author, const std::string& text,
                      const std::string& when = "2017-11-11T13:10:00Z") {
    skg::Post p;
    p.post_id = id;
    p.author_id = author;
    p.text = text;
    p.timestamp = skg::parse_iso8601(when);
    return p;
}

inline skg::UserProfile user(const std::string& id, bool verified = true, double authority = 0.8) {
    skg::UserProfile u;
    u.user_id = id;
    u.screen_name = id + "_sn";
    u.display_name = "Name " + id;
    u.verified = verified;
    u.authority_score = authority;
    u.followers_count = 1000;
    return u;
}

inline skg::BuildInputs inputs(std::vector<skg::Post> posts, const std::vector<skg::UserProfile>& users) {
    skg::BuildInputs in;
    in.posts = std::move(posts);
    for (const auto& u : users) in.users[u.user_id] = u;
    return in;
}

inline skg::BuildInputs corpus_inputs(const skg::Corpus& c) {
    skg::BuildInputs in;
    in.posts = c.posts;
    for (const auto& u : c.users) in.users[u.user_id] = u;
    for (const auto& l : c.links) in.links[l.url] = l;
    return in;
}

// A small corpus over three hours.
inline skg::CorpusSpec small_spec() {
    skg::CorpusSpec spec;
    spec.users = 80;
    spec.verified = 10;
    spec.posts = 900;
    spec.links = 40;
    return spec;
}

// Structural comparison with a tolerance on floating point values.
inline bool json_near(const nlohmann::json& a, const nlohmann::json& b, double tol = 1e-9) {
    if (a.is_number() && b.is_number()) {
        double x = a.get<double>(), y = b.get<double>();
        return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
    }
    if (a.type() != b.type()) return false;
    if (a.is_object()) {
        if (a.size() != b.size()) return false;
        for (auto it = a.begin(); it != a.end(); ++it)
            if (!b.contains(it.key()) || !json_near(it.value(), b.at(it.key()), tol)) return false;
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!json_near(a[i], b[i], tol)) return false;
        return true;
    }
    return a == b;
}

inline nlohmann::json snapshot_json(const skg::GraphSnapshot& s) {
    nlohmann::json j;
    for (const auto& [k, v] : s.users) j["users"][k] = skg::to_json(v);
    for (const auto& [k, v] : s.links) j["links"][k] = skg::to_json(v);
    for (const auto& [k, v] : s.topics) j["topics"][k] = skg::to_json(v);
    for (const auto& [k, v] : s.posts) j["posts"][k] = skg::to_json(v);
    for (skg::Table t : skg::all_tables())
        for (const auto& [k, v] : s.table(t)) j["connections"][std::string(skg::table_info(t).name)].push_back(skg::to_json(v));
    j["index"] = s.topic_index;
    j["history"] = s.trend_history;
    j["counts"] = s.manifest.counts;
    return j;
}

class TempDir {
public:
    explicit TempDir(const std::string& name) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / (name + "_" + std::to_string(rd()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace fixture

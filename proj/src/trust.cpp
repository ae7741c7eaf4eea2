#include "skg/trust.hpp"

#include "skg/error.hpp"

#include <unordered_map>

namespace skg {

std::vector<InteractionEdge> build_interactions(const std::vector<Post>& posts) {
    std::vector<InteractionEdge> edges;
    for (const auto& post : posts) {
        for (const auto& mentioned : post.mentioned_user_ids) {
            if (mentioned != post.author_id) edges.push_back({post.author_id, mentioned, post.timestamp, post.post_id});
        }
        if (post.reply_to_user_id && *post.reply_to_user_id != post.author_id) {
            edges.push_back({post.author_id, *post.reply_to_user_id, post.timestamp, post.post_id});
        }
    }
    return edges;
}

std::set<std::pair<std::string, std::string>> initiated_pairs(const std::vector<InteractionEdge>& edges) {
    // earliest[a->b] < latest[b->a] is equivalent to the existence of a
    // qualifying (t1, t2) pair.
    std::map<std::pair<std::string, std::string>, Instant> earliest;
    std::map<std::pair<std::string, std::string>, Instant> latest;
    for (const auto& e : edges) {
        auto key = std::make_pair(e.from_user, e.to_user);
        auto [lo, inserted_lo] = earliest.emplace(key, e.timestamp);
        if (!inserted_lo && e.timestamp < lo->second) lo->second = e.timestamp;
        auto [hi, inserted_hi] = latest.emplace(key, e.timestamp);
        if (!inserted_hi && hi->second < e.timestamp) hi->second = e.timestamp;
    }
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [key, first] : earliest) {
        auto back = latest.find({key.second, key.first});
        if (back != latest.end() && first < back->second) out.insert(key);
    }
    return out;
}

TrustResult expand_trusted(const std::set<std::string>& seeds, const std::vector<InteractionEdge>& edges,
                           int max_iterations) {
    if (max_iterations < 1) throw ValidationError("max_iterations", "max_iterations must be >= 1");

    std::unordered_map<std::string, std::vector<std::string>> initiated;
    for (const auto& [from, to] : initiated_pairs(edges)) initiated[from].push_back(to);

    TrustResult result;
    result.trusted = seeds;
    for (const auto& s : seeds) result.ring[s] = 0;

    std::set<std::string> frontier = seeds;
    for (int k = 1; k <= max_iterations; ++k) {
        result.iterations_run = k;
        std::set<std::string> next;
        for (const auto& v : frontier) {
            auto it = initiated.find(v);
            if (it == initiated.end()) continue;
            for (const auto& u : it->second) {
                if (!result.trusted.contains(u)) next.insert(u);
            }
        }
        if (next.empty()) break;
        for (const auto& u : next) {
            result.trusted.insert(u);
            result.ring[u] = k;
        }
        frontier = std::move(next);
    }
    return result;
}

}  // namespace skg

#pragma once

#include "skg/ingest.hpp"

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace skg {

// A retweet cascade. `parent` has an entry for every node except the root.
struct DiffusionTree {
    std::string root_post_id;
    std::set<std::string> nodes;
    std::map<std::string, std::string> parent;

    std::size_t size() const { return nodes.size(); }
};

// Each retweet attaches to its retweeted post when that post is in the batch,
// otherwise to the earliest original by the retweeted user that shares one of
// its links, otherwise it roots its own tree. Cycles are broken by dropping
// the parent edge of the smallest post id on the cycle. Trees are sorted by
// root id.
std::vector<DiffusionTree> build_trees(const std::vector<Post>& posts);

// Average shortest-path distance over ordered node pairs of the undirected
// tree. Computed from subtree sizes: each edge separating s from n-s nodes
// lies on 2*s*(n-s) ordered paths. Defined as 0 for a single node.
double structural_virality(const DiffusionTree& tree);

// Distinct authors among `posts` sharing `url`.
std::size_t popularity(const std::string& url, const std::vector<Post>& posts);

// Population z-score of `current` against `history`; 0 for an empty history.
double trending_score(double current, const std::vector<double>& history);

inline constexpr double kTrendingEpsilon = 1e-6;

struct LinkActivity {
    std::string url;
    std::size_t popularity = 0;
    double virality = 0.0;  // max over trees rooted at a post sharing the url
    double trending = 0.0;
    Instant first_seen;
};

using TrendHistory = std::map<std::string, std::vector<double>>;

// Trend history keys for links are "link:<url>".
std::string link_history_key(const std::string& url);

// One activity per url shared in `posts`, sorted by url.
std::vector<LinkActivity> compute_link_activity(const std::vector<Post>& posts, const std::vector<DiffusionTree>& trees,
                                                const TrendHistory& history);

// Union of the top-k by popularity, virality and trending score. Ties go to
// the earlier first_seen, then the smaller url.
std::set<std::string> select_links(const std::vector<LinkActivity>& activities, std::size_t k_popular,
                                   std::size_t k_viral, std::size_t k_trending);

}  // namespace skg

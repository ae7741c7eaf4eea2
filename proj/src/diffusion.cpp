#include "skg/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <spdlog/spdlog.h>

namespace skg {

std::vector<DiffusionTree> build_trees(const std::vector<Post>& posts) {
    std::unordered_map<std::string, const Post*> by_id;
    for (const auto& p : posts) by_id.emplace(p.post_id, &p);

    // Earliest original per (author, url), for retweets whose source post is absent.
    std::map<std::pair<std::string, std::string>, const Post*> original_by_author_url;
    for (const auto& p : posts) {
        if (p.is_retweet()) continue;
        for (const auto& url : p.link_urls) {
            auto [it, inserted] = original_by_author_url.emplace(std::make_pair(p.author_id, url), &p);
            const Post* cur = it->second;
            if (!inserted && (p.timestamp < cur->timestamp ||
                              (p.timestamp == cur->timestamp && p.post_id < cur->post_id))) {
                it->second = &p;
            }
        }
    }

    std::map<std::string, std::string> parent;
    for (const auto& p : posts) {
        if (!p.is_retweet()) continue;
        if (p.retweet_of_post_id && by_id.contains(*p.retweet_of_post_id)) {
            parent[p.post_id] = *p.retweet_of_post_id;
            continue;
        }
        if (!p.retweet_of_user_id) continue;
        for (const auto& url : p.link_urls) {
            auto it = original_by_author_url.find({*p.retweet_of_user_id, url});
            if (it != original_by_author_url.end() && it->second->post_id != p.post_id) {
                parent[p.post_id] = it->second->post_id;
                break;
            }
        }
    }

    // Break cycles. Walk up from every node in id order; a revisit within the
    // current walk is a cycle.
    for (const auto& p : posts) {
        std::vector<std::string> path;
        std::set<std::string> on_path;
        std::string cur = p.post_id;
        while (true) {
            if (on_path.contains(cur)) {
                auto start = std::find(path.begin(), path.end(), cur);
                std::string victim = *std::min_element(start, path.end());
                spdlog::warn("retweet cycle through post {}; dropping its parent edge", victim);
                parent.erase(victim);
                break;
            }
            on_path.insert(cur);
            path.push_back(cur);
            auto it = parent.find(cur);
            if (it == parent.end()) break;
            cur = it->second;
        }
    }

    std::map<std::string, DiffusionTree> trees;
    auto root_of = [&](const std::string& id) {
        std::string cur = id;
        for (auto it = parent.find(cur); it != parent.end(); it = parent.find(cur)) cur = it->second;
        return cur;
    };
    for (const auto& p : posts) {
        std::string root = root_of(p.post_id);
        auto& tree = trees[root];
        tree.root_post_id = root;
        tree.nodes.insert(p.post_id);
        if (auto it = parent.find(p.post_id); it != parent.end()) tree.parent[p.post_id] = it->second;
    }

    std::vector<DiffusionTree> out;
    out.reserve(trees.size());
    for (auto& [root, tree] : trees) out.push_back(std::move(tree));
    return out;
}

double structural_virality(const DiffusionTree& tree) {
    const std::size_t n = tree.nodes.size();
    if (n < 2) return 0.0;

    std::unordered_map<std::string, std::vector<std::string>> children;
    for (const auto& [child, par] : tree.parent) children[par].push_back(child);

    // Iterative post-order from the root to get subtree sizes.
    std::unordered_map<std::string, std::size_t> subtree;
    std::vector<std::pair<std::string, bool>> stack{{tree.root_post_id, false}};
    while (!stack.empty()) {
        auto [node, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
            std::size_t size = 1;
            for (const auto& c : children[node]) size += subtree[c];
            subtree[node] = size;
            continue;
        }
        stack.emplace_back(node, true);
        for (const auto& c : children[node]) stack.emplace_back(c, false);
    }

    double total = 0.0;
    for (const auto& [child, par] : tree.parent) {
        double s = static_cast<double>(subtree[child]);
        total += 2.0 * s * (static_cast<double>(n) - s);
    }
    return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::size_t popularity(const std::string& url, const std::vector<Post>& posts) {
    std::set<std::string> authors;
    for (const auto& p : posts) {
        if (std::find(p.link_urls.begin(), p.link_urls.end(), url) != p.link_urls.end()) authors.insert(p.author_id);
    }
    return authors.size();
}

double trending_score(double current, const std::vector<double>& history) {
    if (history.empty()) return 0.0;
    double n = static_cast<double>(history.size());
    double mean = 0.0;
    for (double h : history) mean += h;
    mean /= n;
    double var = 0.0;
    for (double h : history) var += (h - mean) * (h - mean);
    var /= n;
    return (current - mean) / (std::sqrt(var) + kTrendingEpsilon);
}

std::string link_history_key(const std::string& url) { return "link:" + url; }

std::vector<LinkActivity> compute_link_activity(const std::vector<Post>& posts, const std::vector<DiffusionTree>& trees,
                                                const TrendHistory& history) {
    std::unordered_map<std::string, const Post*> by_id;
    for (const auto& p : posts) by_id.emplace(p.post_id, &p);

    std::map<std::string, LinkActivity> acc;
    std::map<std::string, std::set<std::string>> authors;
    for (const auto& p : posts) {
        for (const auto& url : p.link_urls) {
            auto [it, inserted] = acc.try_emplace(url);
            if (inserted) {
                it->second.url = url;
                it->second.first_seen = p.timestamp;
            } else if (p.timestamp < it->second.first_seen) {
                it->second.first_seen = p.timestamp;
            }
            authors[url].insert(p.author_id);
        }
    }
    for (const auto& tree : trees) {
        auto root = by_id.find(tree.root_post_id);
        if (root == by_id.end()) continue;
        double v = structural_virality(tree);
        for (const auto& url : root->second->link_urls) {
            auto& activity = acc[url];
            activity.virality = std::max(activity.virality, v);
        }
    }

    std::vector<LinkActivity> out;
    for (auto& [url, activity] : acc) {
        activity.popularity = authors[url].size();
        auto h = history.find(link_history_key(url));
        activity.trending = trending_score(static_cast<double>(activity.popularity),
                                           h == history.end() ? std::vector<double>{} : h->second);
        out.push_back(std::move(activity));
    }
    return out;
}

std::set<std::string> select_links(const std::vector<LinkActivity>& activities, std::size_t k_popular,
                                   std::size_t k_viral, std::size_t k_trending) {
    std::set<std::string> out;
    auto take_top = [&](std::size_t k, auto metric) {
        std::vector<const LinkActivity*> order;
        for (const auto& a : activities) order.push_back(&a);
        std::sort(order.begin(), order.end(), [&](const LinkActivity* a, const LinkActivity* b) {
            auto ma = metric(*a), mb = metric(*b);
            if (ma != mb) return ma > mb;
            if (a->first_seen != b->first_seen) return a->first_seen < b->first_seen;
            return a->url < b->url;
        });
        for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.insert(order[i]->url);
    };
    take_top(k_popular, [](const LinkActivity& a) { return static_cast<double>(a.popularity); });
    take_top(k_viral, [](const LinkActivity& a) { return a.virality; });
    take_top(k_trending, [](const LinkActivity& a) { return a.trending; });
    return out;
}

}  // namespace skg

#include "skg/rollup.hpp"

#include "skg/error.hpp"
#include "skg/pipeline.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>

namespace skg {
namespace {

void sum_terms(TermVector& into, const TermVector& other) {
    if (into.key.empty()) into.key = other.key;
    std::map<std::string, ScoredTerm> acc;
    for (auto& t : into.terms) acc.emplace(t.term, std::move(t));
    for (const auto& t : other.terms) {
        auto [it, inserted] = acc.try_emplace(t.term, t);
        if (inserted) continue;
        it->second.score += t.score;
        it->second.tf += t.tf;
        for (const auto& [name, value] : t.components) it->second.components[name] += value;
    }
    into.terms.clear();
    for (auto& [term, scored] : acc) into.terms.push_back(std::move(scored));
}

void rank_terms(TermVector& v, std::size_t max_terms) {
    std::sort(v.terms.begin(), v.terms.end(), ranks_before);
    if (v.terms.size() > max_terms) v.terms.resize(max_terms);
}

void check_parts(const std::vector<GraphSnapshot>& parts, const Interval& target) {
    if (parts.empty()) throw ValidationError("parts", "merge needs at least one snapshot");
    for (const auto& p : parts) {
        if (p.interval.granularity >= target.granularity) {
            throw ValidationError("parts", "part " + p.interval.label() + " is not finer than the target " +
                                               target.label());
        }
        if (!target.contains(p.interval)) {
            throw ValidationError("parts", "part " + p.interval.label() + " lies outside " + target.label());
        }
    }
}

bool is_post_table(Table t) { return table_info(t).right == NodeKind::post; }

std::set<std::string> referenced_posts(const GraphSnapshot& s) {
    std::set<std::string> out;
    for (Table t : all_tables()) {
        for (const auto& [key, row] : s.table(t)) {
            out.insert(row.supporting_post_ids.begin(), row.supporting_post_ids.end());
            if (row.right_kind == NodeKind::post) out.insert(row.right_id);
        }
    }
    return out;
}

}  // namespace

MergeParams merge_params(const PipelineConfig& config) {
    MergeParams p;
    p.k_posts = config.k_posts;
    p.signature_terms = config.link_signature.max_terms;
    p.context_terms = config.contextual_vector.max_terms;
    p.fan = config.fan;
    p.history_max_length = config.history_max_length;
    return p;
}

PartialMerge lift(const GraphSnapshot& part) {
    PartialMerge out{part, {part.interval}, {}};
    for (Table table : all_tables()) {
        std::erase_if(out.acc.table(table), [](const auto& kv) { return kv.first.relation == Relation::fanOrAuthority; });
    }
    Instant t = part.interval.start;
    for (const auto& [id, user] : part.users) out.stamps["user:" + id] = t;
    for (const auto& [id, post] : part.posts) out.stamps["post:" + id] = t;
    for (const auto& [url, link] : part.links) {
        out.stamps["spam:" + url] = t;
        if (link.title) out.stamps["title:" + url] = t;
        if (link.description) out.stamps["description:" + url] = t;
    }
    return out;
}

PartialMerge combine(const PartialMerge& a, const PartialMerge& b) {
    for (const auto& x : a.parts) {
        for (const auto& y : b.parts) {
            if (x.granularity != y.granularity) throw ValidationError("parts", "parts mix granularities");
            if (x.start < y.end() && y.start < x.end()) {
                throw ValidationError("parts", "parts " + x.label() + " and " + y.label() + " overlap");
            }
        }
    }

    PartialMerge out{a.acc, {}, a.stamps};
    std::merge(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end(), std::back_inserter(out.parts),
               [](const Interval& x, const Interval& y) { return x.start < y.start; });
    GraphSnapshot& m = out.acc;

    // True when b's value for `field` is newer than what the accumulator holds.
    auto take = [&](const std::string& field) {
        auto theirs = b.stamps.find(field);
        if (theirs == b.stamps.end()) return false;
        auto [mine, inserted] = out.stamps.try_emplace(field, theirs->second);
        if (inserted) return true;
        if (theirs->second <= mine->second) return false;
        mine->second = theirs->second;
        return true;
    };

    for (const auto& [id, user] : b.acc.users)
        if (take("user:" + id)) m.users[id] = user;
    for (const auto& [id, post] : b.acc.posts)
        if (take("post:" + id)) m.posts[id] = post;

    for (const auto& [url, link] : b.acc.links) {
        auto [it, inserted] = m.links.try_emplace(url, link);
        if (inserted) {
            for (const char* f : {"spam:", "title:", "description:"}) take(f + url);
            continue;
        }
        LinkRecord& r = it->second;
        r.popularity += link.popularity;
        r.virality = std::max(r.virality, link.virality);
        r.first_seen = std::min(r.first_seen, link.first_seen);
        if (take("spam:" + url)) r.spam_score = link.spam_score;
        if (take("title:" + url)) r.title = link.title;
        if (take("description:" + url)) r.description = link.description;
        sum_terms(r.social_signature, link.social_signature);
    }

    for (const auto& [key, topic] : b.acc.topics) {
        auto [it, inserted] = m.topics.try_emplace(key, topic);
        if (inserted) continue;
        TopicRecord& r = it->second;
        r.frequency += topic.frequency;
        r.first_seen = std::min(r.first_seen, topic.first_seen);
        if (topic.contextual_vector) {
            if (r.contextual_vector) {
                sum_terms(*r.contextual_vector, *topic.contextual_vector);
            } else {
                r.contextual_vector = topic.contextual_vector;
            }
        }
    }

    for (Table t : all_tables()) {
        auto& table = m.table(t);
        for (const auto& [key, row] : b.acc.table(t)) {
            auto [it, inserted] = table.try_emplace(key, row);
            if (inserted || is_post_table(t)) continue;
            ConnectionRecord& r = it->second;
            r.score += row.score;
            r.post_count += row.post_count;
            r.active_days += row.active_days;
            std::vector<std::string> ids = r.supporting_post_ids;
            ids.insert(ids.end(), row.supporting_post_ids.begin(), row.supporting_post_ids.end());
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            r.supporting_post_ids = std::move(ids);
            if (row.timestamp && (!r.timestamp || *row.timestamp < *r.timestamp)) r.timestamp = row.timestamp;
        }
    }
    return out;
}

GraphSnapshot finalize(const PartialMerge& merged, const Interval& target, const MergeParams& params,
                       const TrendHistory& previous) {
    GraphSnapshot out = merged.acc;
    out.interval = target;
    out.trend_history.clear();

    for (auto& [id, user] : out.users) user.main_score = user_main_score(user.authority_score, user.followers_count);
    for (auto& [url, link] : out.links) {
        link.main_score = link_main_score(link.popularity, link.spam_score);
        rank_terms(link.social_signature, params.signature_terms);
    }
    for (auto& [key, topic] : out.topics) {
        topic.main_score = topic_main_score(topic.frequency);
        if (topic.contextual_vector) rank_terms(*topic.contextual_vector, params.context_terms);
    }
    PostRanks ranks;
    for (auto& [id, post] : out.posts) {
        post.main_score = post_main_score(post.quality_score, post.retweet_count, post.favorite_count);
        ranks[id] = PostRank{post.main_score, post.timestamp};
    }

    for (Table t : all_tables()) {
        for (auto& [key, row] : out.table(t)) {
            if (!is_post_table(t)) {
                row.supporting_post_ids = top_posts(std::move(row.supporting_post_ids), ranks, params.k_posts);
            }
            if (target.granularity == Granularity::day) row.active_days = std::min<std::uint64_t>(row.active_days, 1);
        }
        if (!is_post_table(t)) continue;
        std::map<std::string, std::vector<std::string>> examples;
        for (const auto& [key, row] : out.table(t)) examples[key.left_id].push_back(key.right_id);
        std::set<std::pair<std::string, std::string>> keep;
        for (auto& [element, ids] : examples) {
            for (auto& id : top_posts(std::move(ids), ranks, params.k_posts)) keep.emplace(element, std::move(id));
        }
        std::erase_if(out.table(t),
                      [&](const auto& kv) { return !keep.contains({kv.first.left_id, kv.first.right_id}); });
    }
    label_fan_or_authority(out, params.fan);

    auto referenced = referenced_posts(out);
    std::erase_if(out.posts, [&](const auto& kv) { return !referenced.contains(kv.first); });

    // Trend at the target granularity.
    std::map<std::string, double> current;
    for (auto& [url, link] : out.links) {
        auto key = link_history_key(url);
        current[key] = static_cast<double>(link.popularity);
        auto h = previous.find(key);
        link.trending = trending_score(current[key], h == previous.end() ? std::vector<double>{} : h->second);
    }
    for (auto& [key, topic] : out.topics) {
        current[key] = static_cast<double>(topic.frequency);
        auto h = previous.find(key);
        topic.trending = trending_score(current[key], h == previous.end() ? std::vector<double>{} : h->second);
    }
    out.trend_history = advance_history(previous, current, params.history_max_length);
    out.topic_index = cluster_topics(out.topics);

    std::vector<std::string> labels;
    for (const auto& p : merged.parts) labels.push_back(p.label());
    out.manifest.build_version = kBuildVersion;
    out.manifest.parameters = {{"merged_from", labels},
                               {"k_posts", params.k_posts},
                               {"fan", {{"min_days", params.fan.min_days}, {"top_fraction", params.fan.top_fraction}}}};
    refresh_manifest_counts(out);
    return out;
}

GraphSnapshot merge_snapshots(const std::vector<GraphSnapshot>& parts, const Interval& target,
                              const MergeParams& params, const TrendHistory& previous) {
    check_parts(parts, target);
    PartialMerge acc = lift(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) acc = combine(acc, lift(parts[i]));
    return finalize(acc, target, params, previous);
}

GraphSnapshot prune(const GraphSnapshot& snapshot, const PruneThresholds& thresholds) {
    GraphSnapshot out = snapshot;
    const Interval& span = snapshot.interval;

    std::erase_if(out.links, [&](const auto& kv) {
        return static_cast<double>(kv.second.popularity) < thresholds.threshold("link", span);
    });
    std::set<std::string> removed_topics;
    std::erase_if(out.topics, [&](const auto& kv) {
        bool drop = static_cast<double>(kv.second.frequency) <
                    thresholds.threshold("topic:" + std::string(to_string(kv.second.topic.type)), span);
        if (drop) removed_topics.insert(kv.first);
        return drop;
    });

    for (Table t : all_tables()) {
        const std::string name(table_info(t).name);
        std::erase_if(out.table(t), [&](const auto& kv) {
            const ConnectionRecord& row = kv.second;
            if (row.score < thresholds.threshold(name + ":" + std::string(to_string(row.relation)), span)) return true;
            return !out.has_node(row.left_kind, row.left_id) || !out.has_node(row.right_kind, row.right_id);
        });
    }

    auto before = referenced_posts(snapshot);
    auto after = referenced_posts(out);
    std::erase_if(out.posts, [&](const auto& kv) { return before.contains(kv.first) && !after.contains(kv.first); });

    for (auto it = out.topic_index.begin(); it != out.topic_index.end();) {
        for (const auto& key : removed_topics) it->second.erase(key);
        it = it->second.empty() ? out.topic_index.erase(it) : std::next(it);
    }
    refresh_manifest_counts(out);
    return out;
}

}  // namespace skg

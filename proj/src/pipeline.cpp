#include "skg/pipeline.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

namespace skg {
namespace {

struct TopicStats {
    Topic topic;
    std::set<std::string> authors;
    Instant first_seen;
    double trending = 0.0;
};

const std::vector<double>& series_or_empty(const TrendHistory& h, const std::string& key) {
    static const std::vector<double> empty;
    auto it = h.find(key);
    return it == h.end() ? empty : it->second;
}

std::set<std::string> select_topics(const std::map<std::string, TopicStats>& stats, const TopicSelectionParams& p) {
    std::map<TopicType, std::vector<const TopicStats*>> by_type;
    for (const auto& [key, st] : stats) by_type[st.topic.type].push_back(&st);

    std::set<std::string> out;
    for (auto& [type, list] : by_type) {
        std::sort(list.begin(), list.end(), [](const TopicStats* a, const TopicStats* b) {
            if (a->authors.size() != b->authors.size()) return a->authors.size() > b->authors.size();
            if (a->first_seen != b->first_seen) return a->first_seen < b->first_seen;
            return a->topic.key() < b->topic.key();
        });
        for (std::size_t i = 0; i < std::min(p.k_popular_per_type, list.size()); ++i) out.insert(list[i]->topic.key());

        std::sort(list.begin(), list.end(), [](const TopicStats* a, const TopicStats* b) {
            if (a->trending != b->trending) return a->trending > b->trending;
            if (a->first_seen != b->first_seen) return a->first_seen < b->first_seen;
            return a->topic.key() < b->topic.key();
        });
        for (std::size_t i = 0; i < std::min(p.k_trending_per_type, list.size()) && list[i]->trending > 0.0; ++i) {
            out.insert(list[i]->topic.key());
        }
    }
    return out;
}

}  // namespace

TrendHistory advance_history(const TrendHistory& previous, const std::map<std::string, double>& current,
                             std::size_t max_length) {
    TrendHistory out;
    auto push = [&](const std::string& key, std::vector<double> series, double value) {
        series.push_back(value);
        if (series.size() > max_length) series.erase(series.begin(), series.end() - static_cast<long>(max_length));
        if (std::any_of(series.begin(), series.end(), [](double v) { return v != 0.0; })) {
            out.emplace(key, std::move(series));
        }
    };
    for (const auto& [key, series] : previous) {
        auto it = current.find(key);
        push(key, series, it == current.end() ? 0.0 : it->second);
    }
    for (const auto& [key, value] : current) {
        if (!previous.contains(key)) push(key, {}, value);
    }
    return out;
}

GraphSnapshot build_snapshot(const BuildInputs& inputs, const Interval& interval, const PipelineConfig& config,
                             const BuildResources& resources, const TrendHistory& previous) {
    config.validate();
    GraphSnapshot s;
    s.interval = interval;

    std::set<std::string> seeds;
    for (const auto& [id, user] : inputs.users) {
        if (user.verified) seeds.insert(id);
    }
    TrustResult trust = expand_trusted(seeds, build_interactions(inputs.posts), config.trust_max_iterations);

    std::vector<Post> window;
    for (const auto& p : inputs.posts) {
        if (interval.contains(p.timestamp)) window.push_back(p);
    }
    std::vector<Post> retained = filter_posts(window, inputs.users, inputs.links, config.filter, trust.trusted);
    spdlog::info("{}: {} posts in window, {} retained, {} trusted users", interval.label(), window.size(),
                 retained.size(), trust.trusted.size());

    // Post ranks.
    PostRanks ranks;
    std::map<std::string, PostRecord> post_records;
    for (const auto& p : retained) {
        PostRecord r;
        r.post_id = p.post_id;
        r.author_id = p.author_id;
        r.timestamp = p.timestamp;
        r.text = p.text;
        r.retweet_count = p.retweet_count;
        r.favorite_count = p.favorite_count;
        r.quality_score = post_quality(p, inputs.users.at(p.author_id));
        r.main_score = post_main_score(r.quality_score, p.retweet_count, p.favorite_count);
        ranks[p.post_id] = PostRank{r.main_score, r.timestamp};
        post_records.emplace(p.post_id, std::move(r));
    }

    // Links.
    GlobalStats global = build_global_stats(retained, resources.stop_words, config.extract.n_max);
    auto trees = build_trees(retained);
    auto activity = compute_link_activity(retained, trees, previous);
    Selection selected;
    selected.links = select_links(activity, config.links.k_popular, config.links.k_viral, config.links.k_trending);

    // Topics.
    std::vector<std::vector<Topic>> post_topics;
    post_topics.reserve(retained.size());
    std::map<std::string, TopicStats> topic_stats;
    for (const auto& p : retained) {
        post_topics.push_back(extract_topics(p.text, resources.stop_words, resources.gazetteer, config.extract));
        for (const auto& t : post_topics.back()) {
            auto [it, inserted] = topic_stats.try_emplace(t.key());
            if (inserted) {
                it->second.topic = t;
                it->second.first_seen = p.timestamp;
            }
            it->second.authors.insert(p.author_id);
            it->second.first_seen = std::min(it->second.first_seen, p.timestamp);
        }
    }
    for (auto& [key, st] : topic_stats) {
        st.trending = trending_score(static_cast<double>(st.authors.size()), series_or_empty(previous, key));
    }
    selected.topics = select_topics(topic_stats, config.topics);

    std::map<std::string, std::vector<const Post*>> posts_by_link;
    for (const auto& p : retained) {
        for (const auto& url : p.link_urls) {
            if (selected.links.contains(url)) posts_by_link[url].push_back(&p);
        }
    }
    std::map<std::string, SocialSignature> signatures;
    for (const auto& url : selected.links) {
        signatures[url] =
            social_signature(url, posts_by_link[url], global, config.link_signature, resources.stop_words);
    }

    std::map<std::string, std::vector<const Post*>> posts_by_topic;
    for (std::size_t i = 0; i < retained.size(); ++i) {
        for (const auto& t : post_topics[i]) {
            if ((t.type == TopicType::hashtag || t.type == TopicType::entity) && selected.topics.contains(t.key())) {
                posts_by_topic[t.key()].push_back(&retained[i]);
            }
        }
    }
    std::map<std::string, ContextualVector> vectors;
    for (const auto& [key, posts] : posts_by_topic) {
        vectors[key] = contextual_vector(topic_stats.at(key).topic, posts, global, config.contextual_vector,
                                         resources.stop_words);
    }

    // Signature and contextual-vector n-grams join the topic selection.
    auto add_terms = [&](const TermVector& v) {
        for (const auto& term : v.terms) {
            std::string key = Topic{TopicType::ngram, term.term, std::nullopt}.key();
            if (topic_stats.contains(key)) selected.topics.insert(key);
        }
    };
    for (const auto& [url, sig] : signatures) add_terms(sig);
    for (const auto& [key, vec] : vectors) add_terms(vec);

    // Users: selectable accounts that take part in a retained post.
    std::set<std::string> selectable = select_users(inputs.users, trust.trusted, config.filter);
    for (const auto& p : retained) {
        std::vector<std::string> involved = p.mentioned_user_ids;
        involved.push_back(p.author_id);
        if (p.reply_to_user_id) involved.push_back(*p.reply_to_user_id);
        if (p.retweet_of_user_id) involved.push_back(*p.retweet_of_user_id);
        for (const auto& u : involved) {
            if (selectable.contains(u)) selected.users.insert(u);
        }
    }

    for (const auto& id : selected.users) {
        const auto& profile = inputs.users.at(id);
        UserRecord r;
        r.user_id = id;
        r.screen_name = profile.screen_name;
        r.display_name = profile.display_name;
        r.profile_image_url = profile.profile_image_url;
        r.authority_score = profile.authority_score;
        r.followers_count = profile.followers_count;
        r.verified = profile.verified;
        if (auto it = trust.ring.find(id); it != trust.ring.end()) r.trusted_ring = it->second;
        r.main_score = user_main_score(r.authority_score, r.followers_count);
        s.users.emplace(id, std::move(r));
    }
    for (const auto& a : activity) {
        if (!selected.links.contains(a.url)) continue;
        LinkRecord r;
        r.url = a.url;
        if (auto meta = inputs.links.find(a.url); meta != inputs.links.end()) {
            r.title = meta->second.title;
            r.description = meta->second.description;
            r.spam_score = meta->second.spam_score;
        }
        r.popularity = a.popularity;
        r.virality = a.virality;
        r.trending = a.trending;
        r.social_signature = std::move(signatures[a.url]);
        r.first_seen = a.first_seen;
        r.main_score = link_main_score(r.popularity, r.spam_score);
        s.links.emplace(a.url, std::move(r));
    }
    for (const auto& key : selected.topics) {
        const auto& st = topic_stats.at(key);
        TopicRecord r;
        r.topic = st.topic;
        r.frequency = st.authors.size();
        r.trending = st.trending;
        if (auto v = vectors.find(key); v != vectors.end()) r.contextual_vector = std::move(v->second);
        r.first_seen = st.first_seen;
        r.main_score = topic_main_score(r.frequency);
        s.topics.emplace(key, std::move(r));
    }

    build_connections(retained, post_topics, selected, ranks, config.k_posts, s);
    label_fan_or_authority(s, config.fan);
    select_posts(selected, retained, post_topics, ranks, config.k_posts, s);

    // Posts table: examples plus every supporting post.
    for (Table t : all_tables()) {
        for (const auto& [key, row] : s.table(t)) {
            for (const auto& pid : row.supporting_post_ids) s.posts.try_emplace(pid, post_records.at(pid));
        }
    }
    s.topic_index = cluster_topics(s.topics);

    std::map<std::string, double> current;
    for (const auto& a : activity) current[link_history_key(a.url)] = static_cast<double>(a.popularity);
    for (const auto& [key, st] : topic_stats) {
        if (st.authors.size() >= config.topics.min_tracked_frequency || previous.contains(key)) {
            current[key] = static_cast<double>(st.authors.size());
        }
    }
    s.trend_history = advance_history(previous, current, config.history_max_length);

    s.manifest.build_version = kBuildVersion;
    s.manifest.parameters = {{"config", config.to_json()},
                             {"inputs",
                              {{"posts", inputs.posts.size()},
                               {"skipped_lines", inputs.skipped_posts},
                               {"window_posts", window.size()},
                               {"retained_posts", retained.size()}}},
                             {"trust", {{"trusted", trust.trusted.size()}, {"iterations", trust.iterations_run}}}};
    refresh_manifest_counts(s);
    return s;
}

}  // namespace skg

#include "skg/graph.hpp"

#include "skg/error.hpp"

#include <algorithm>
#include <cmath>

namespace skg {
namespace {

using nlohmann::json;

const std::array<TableInfo, kTableCount>& table_infos() {
    using R = Relation;
    using K = NodeKind;
    static const std::array<TableInfo, kTableCount> infos{{
        {Table::users_links, "users_links", K::user, K::link, {R::authored, R::coreferenced}, false},
        {Table::users_topics, "users_topics", K::user, K::topic,
         {R::authored, R::coreferenced, R::fanOrAuthority}, false},
        {Table::users_users, "users_users", K::user, K::user,
         {R::mentioned, R::replied, R::retweeted, R::coreferenced}, false},
        {Table::links_topics, "links_topics", K::link, K::topic, {R::cooccurred}, false},
        {Table::topics_topics, "topics_topics", K::topic, K::topic, {R::cooccurred}, true},
        {Table::links_links, "links_links", K::link, K::link, {R::cooccurred}, true},
        {Table::users_posts, "users_posts", K::user, K::post, {R::authored, R::mentioned}, false},
        {Table::links_posts, "links_posts", K::link, K::post, {R::mentioned}, false},
        {Table::topics_posts, "topics_posts", K::topic, K::post, {R::mentioned}, false},
    }};
    return infos;
}

std::int64_t utc_day(Instant t) {
    return t.seconds >= 0 ? t.seconds / 86400 : (t.seconds - 86399) / 86400;
}

struct Accumulator {
    std::set<std::string> authors;
    std::vector<std::string> posts;
    std::set<std::int64_t> days;
};

using AccTable = std::map<ConnectionKey, Accumulator>;

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::optional<std::string> opt_string(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::user: return "user";
        case NodeKind::link: return "link";
        case NodeKind::topic: return "topic";
        case NodeKind::post: return "post";
    }
    return "user";
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::authored: return "authored";
        case Relation::coreferenced: return "coreferenced";
        case Relation::mentioned: return "mentioned";
        case Relation::replied: return "replied";
        case Relation::retweeted: return "retweeted";
        case Relation::fanOrAuthority: return "fanOrAuthority";
        case Relation::cooccurred: return "cooccurred";
    }
    return "cooccurred";
}

NodeKind parse_node_kind(std::string_view text) {
    for (auto k : {NodeKind::user, NodeKind::link, NodeKind::topic, NodeKind::post}) {
        if (to_string(k) == text) return k;
    }
    throw ValidationError("kind", "unknown node kind '" + std::string(text) + "'");
}

Relation parse_relation(std::string_view text) {
    for (auto r : {Relation::authored, Relation::coreferenced, Relation::mentioned, Relation::replied,
                   Relation::retweeted, Relation::fanOrAuthority, Relation::cooccurred}) {
        if (to_string(r) == text) return r;
    }
    throw ValidationError("relation", "unknown relation '" + std::string(text) + "'");
}

const TableInfo& table_info(Table t) { return table_infos()[static_cast<std::size_t>(t)]; }

const std::array<Table, kTableCount>& all_tables() {
    static const std::array<Table, kTableCount> tables{
        Table::users_links,   Table::users_topics, Table::users_users, Table::links_topics, Table::topics_topics,
        Table::links_links,   Table::users_posts,  Table::links_posts, Table::topics_posts};
    return tables;
}

Table table_for(NodeKind left, NodeKind right) {
    for (const auto& info : table_infos()) {
        if (info.left == left && info.right == right) return info.table;
    }
    throw ValidationError("kind", "no connection table for " + std::string(to_string(left)) + "-" +
                                      std::string(to_string(right)));
}

bool GraphSnapshot::has_node(NodeKind kind, const std::string& id) const {
    switch (kind) {
        case NodeKind::user: return users.contains(id);
        case NodeKind::link: return links.contains(id);
        case NodeKind::topic: return topics.contains(id);
        case NodeKind::post: return posts.contains(id);
    }
    return false;
}

void refresh_manifest_counts(GraphSnapshot& s) {
    auto& c = s.manifest.counts;
    c.clear();
    c["users"] = s.users.size();
    c["links"] = s.links.size();
    c["topics"] = s.topics.size();
    c["posts"] = s.posts.size();
    for (Table t : all_tables()) c[std::string(table_info(t).name)] = s.table(t).size();
}

double post_quality(const Post& post, const UserProfile& author) {
    double q = (1.0 - post.spam_score) * author.authority_score * (1.0 - post.adult_score);
    return std::clamp(q, 0.0, 1.0);
}

double user_main_score(double authority, std::uint64_t followers) {
    return authority * std::log1p(static_cast<double>(followers));
}

double link_main_score(std::uint64_t popularity, double spam_score) {
    return static_cast<double>(popularity) * (1.0 - spam_score);
}

double topic_main_score(std::uint64_t frequency) { return static_cast<double>(frequency); }

double post_main_score(double quality, std::uint64_t retweets, std::uint64_t favorites) {
    return quality * std::log(1.0 + static_cast<double>(retweets) + static_cast<double>(favorites) + 1.0);
}

std::vector<std::string> top_posts(std::vector<std::string> post_ids, const PostRanks& ranks, std::size_t k) {
    auto rank_of = [&](const std::string& id) {
        auto it = ranks.find(id);
        return it == ranks.end() ? PostRank{} : it->second;
    };
    post_ids = sorted_unique(std::move(post_ids));
    std::sort(post_ids.begin(), post_ids.end(), [&](const std::string& a, const std::string& b) {
        PostRank ra = rank_of(a), rb = rank_of(b);
        if (ra.main_score != rb.main_score) return ra.main_score > rb.main_score;
        if (ra.timestamp != rb.timestamp) return ra.timestamp > rb.timestamp;
        return a < b;
    });
    if (post_ids.size() > k) post_ids.resize(k);
    return post_ids;
}

void build_connections(const std::vector<Post>& posts, const std::vector<std::vector<Topic>>& post_topics,
                       const Selection& selected, const PostRanks& ranks, std::size_t k_posts,
                       GraphSnapshot& out) {
    std::array<AccTable, kTableCount> acc;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        const Post& p = posts[i];
        const std::string& a = p.author_id;
        const std::int64_t day = utc_day(p.timestamp);
        auto add = [&](Table t, std::string left, std::string right, Relation rel) {
            if (table_info(t).symmetric && right < left) std::swap(left, right);
            auto& cell = acc[static_cast<std::size_t>(t)][ConnectionKey{std::move(left), std::move(right), rel}];
            cell.authors.insert(a);
            if (cell.posts.empty() || cell.posts.back() != p.post_id) cell.posts.push_back(p.post_id);
            cell.days.insert(day);
        };

        const bool author_selected = selected.users.contains(a);
        std::vector<std::string> links;
        for (const auto& url : p.link_urls) {
            if (selected.links.contains(url)) links.push_back(url);
        }
        links = sorted_unique(std::move(links));
        std::vector<std::string> topics;
        for (const auto& topic : post_topics[i]) {
            auto key = topic.key();
            if (selected.topics.contains(key)) topics.push_back(std::move(key));
        }
        topics = sorted_unique(std::move(topics));
        std::vector<std::string> mentioned;
        for (const auto& m : p.mentioned_user_ids) {
            if (m != a && selected.users.contains(m)) mentioned.push_back(m);
        }
        mentioned = sorted_unique(std::move(mentioned));

        if (author_selected) {
            for (const auto& l : links) add(Table::users_links, a, l, Relation::authored);
            for (const auto& t : topics) add(Table::users_topics, a, t, Relation::authored);
            for (const auto& m : mentioned) add(Table::users_users, a, m, Relation::mentioned);
            if (p.reply_to_user_id && *p.reply_to_user_id != a && selected.users.contains(*p.reply_to_user_id)) {
                add(Table::users_users, a, *p.reply_to_user_id, Relation::replied);
            }
            if (p.retweet_of_user_id && *p.retweet_of_user_id != a && selected.users.contains(*p.retweet_of_user_id)) {
                add(Table::users_users, a, *p.retweet_of_user_id, Relation::retweeted);
            }
        }
        for (const auto& m : mentioned) {
            for (const auto& l : links) add(Table::users_links, m, l, Relation::coreferenced);
            for (const auto& t : topics) add(Table::users_topics, m, t, Relation::coreferenced);
        }
        for (std::size_t x = 0; x < mentioned.size(); ++x) {
            for (std::size_t y = x + 1; y < mentioned.size(); ++y) {
                add(Table::users_users, mentioned[x], mentioned[y], Relation::coreferenced);
            }
        }
        for (const auto& l : links) {
            for (const auto& t : topics) add(Table::links_topics, l, t, Relation::cooccurred);
        }
        for (std::size_t x = 0; x < topics.size(); ++x) {
            for (std::size_t y = x + 1; y < topics.size(); ++y) {
                add(Table::topics_topics, topics[x], topics[y], Relation::cooccurred);
            }
        }
        for (std::size_t x = 0; x < links.size(); ++x) {
            for (std::size_t y = x + 1; y < links.size(); ++y) {
                add(Table::links_links, links[x], links[y], Relation::cooccurred);
            }
        }
    }

    for (Table t : all_tables()) {
        const auto& info = table_info(t);
        auto& table = out.table(t);
        for (auto& [key, cell] : acc[static_cast<std::size_t>(t)]) {
            ConnectionRecord r;
            r.left_id = key.left_id;
            r.right_id = key.right_id;
            r.left_kind = info.left;
            r.right_kind = info.right;
            r.relation = key.relation;
            if (info.right == NodeKind::topic) r.topic_type = topic_from_key(key.right_id).type;
            r.score = static_cast<double>(cell.authors.size());
            r.post_count = cell.posts.size();
            r.active_days = cell.days.size();
            r.supporting_post_ids = top_posts(std::move(cell.posts), ranks, k_posts);
            table.emplace(key, std::move(r));
        }
    }
}

std::set<std::pair<std::string, std::string>> detect_fan_or_authority(const std::vector<UserTopicActivity>& activity,
                                                                      const FanParams& params) {
    std::map<std::string, std::vector<const UserTopicActivity*>> by_topic;
    for (const auto& a : activity) by_topic[a.topic_key].push_back(&a);

    std::set<std::pair<std::string, std::string>> out;
    for (auto& [topic, users] : by_topic) {
        std::sort(users.begin(), users.end(), [](const UserTopicActivity* a, const UserTopicActivity* b) {
            if (a->post_count != b->post_count) return a->post_count > b->post_count;
            return a->user_id < b->user_id;
        });
        auto quota = static_cast<std::size_t>(std::ceil(params.top_fraction * static_cast<double>(users.size())));
        quota = std::clamp<std::size_t>(quota, 1, users.size());
        for (std::size_t i = 0; i < quota; ++i) {
            if (users[i]->active_days >= params.min_days) out.emplace(users[i]->user_id, topic);
        }
    }
    return out;
}

void label_fan_or_authority(GraphSnapshot& s, const FanParams& params) {
    auto& table = s.table(Table::users_topics);
    std::erase_if(table, [](const auto& kv) { return kv.first.relation == Relation::fanOrAuthority; });

    std::vector<UserTopicActivity> activity;
    for (const auto& [key, row] : table) {
        if (key.relation == Relation::authored) {
            activity.push_back({key.left_id, key.right_id, row.active_days, row.post_count});
        }
    }
    for (const auto& [user, topic] : detect_fan_or_authority(activity, params)) {
        ConnectionRecord row = table.at(ConnectionKey{user, topic, Relation::authored});
        row.relation = Relation::fanOrAuthority;
        table.emplace(row.key(), std::move(row));
    }
}

std::vector<std::string> topic_tokens(const Topic& topic) { return sorted_unique(word_tokens(topic.text)); }

TopicTokenIndex cluster_topics(const std::map<std::string, TopicRecord>& topics) {
    TopicTokenIndex index;
    for (const auto& [key, record] : topics) {
        for (auto& token : topic_tokens(record.topic)) index[std::move(token)].insert(key);
    }
    return index;
}

std::set<std::string> select_posts(const Selection& selected, const std::vector<Post>& posts,
                                   const std::vector<std::vector<Topic>>& post_topics, const PostRanks& ranks,
                                   std::size_t k_posts, GraphSnapshot& out) {
    std::map<std::string, std::vector<std::string>> by_user, by_link, by_topic;
    std::unordered_map<std::string, const Post*> by_id;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        const Post& p = posts[i];
        by_id.emplace(p.post_id, &p);
        if (selected.users.contains(p.author_id)) by_user[p.author_id].push_back(p.post_id);
        std::vector<std::string> targets = p.mentioned_user_ids;
        if (p.reply_to_user_id) targets.push_back(*p.reply_to_user_id);
        if (p.retweet_of_user_id) targets.push_back(*p.retweet_of_user_id);
        for (const auto& u : sorted_unique(std::move(targets))) {
            if (u != p.author_id && selected.users.contains(u)) by_user[u].push_back(p.post_id);
        }
        for (const auto& url : p.link_urls) {
            if (selected.links.contains(url)) by_link[url].push_back(p.post_id);
        }
        for (const auto& topic : post_topics[i]) {
            auto key = topic.key();
            if (selected.topics.contains(key)) by_topic[key].push_back(p.post_id);
        }
    }

    std::set<std::string> examples;
    auto emit = [&](Table t, const std::string& element, const std::string& post_id, Relation rel,
                    std::optional<TopicType> topic_type) {
        const auto& info = table_info(t);
        const Post& p = *by_id.at(post_id);
        ConnectionRecord r;
        r.left_id = element;
        r.right_id = post_id;
        r.left_kind = info.left;
        r.right_kind = NodeKind::post;
        r.relation = rel;
        r.topic_type = topic_type;
        r.score = 1.0;
        r.supporting_post_ids = {post_id};
        r.timestamp = p.timestamp;
        r.post_count = 1;
        r.active_days = 1;
        out.table(t).emplace(r.key(), std::move(r));
        examples.insert(post_id);
    };
    for (auto& [user, ids] : by_user) {
        for (const auto& id : top_posts(std::move(ids), ranks, k_posts)) {
            emit(Table::users_posts, user, id,
                 by_id.at(id)->author_id == user ? Relation::authored : Relation::mentioned, std::nullopt);
        }
    }
    for (auto& [url, ids] : by_link) {
        for (const auto& id : top_posts(std::move(ids), ranks, k_posts)) {
            emit(Table::links_posts, url, id, Relation::mentioned, std::nullopt);
        }
    }
    for (auto& [key, ids] : by_topic) {
        TopicType type = topic_from_key(key).type;
        for (const auto& id : top_posts(std::move(ids), ranks, k_posts)) {
            emit(Table::topics_posts, key, id, Relation::mentioned, type);
        }
    }
    return examples;
}

ConnectionIndex::ConnectionIndex(const GraphSnapshot& s) {
    for (Table t : all_tables()) {
        for (const auto& [key, row] : s.table(t)) {
            by_node_[{row.left_kind, row.left_id}].push_back({t, &row});
            by_node_[{row.right_kind, row.right_id}].push_back({t, &row});
        }
    }
}

const std::vector<ConnectionRef>& ConnectionIndex::at(NodeKind kind, const std::string& id) const {
    auto it = by_node_.find({kind, id});
    return it == by_node_.end() ? empty_ : it->second;
}

std::vector<std::string> check_referential_integrity(const GraphSnapshot& s) {
    std::vector<std::string> problems;
    for (Table t : all_tables()) {
        const auto& name = table_info(t).name;
        for (const auto& [key, row] : s.table(t)) {
            if (!s.has_node(row.left_kind, row.left_id)) {
                problems.push_back(std::string(name) + ": dangling left endpoint '" + row.left_id + "'");
            }
            if (!s.has_node(row.right_kind, row.right_id)) {
                problems.push_back(std::string(name) + ": dangling right endpoint '" + row.right_id + "'");
            }
            for (const auto& pid : row.supporting_post_ids) {
                if (!s.posts.contains(pid)) {
                    problems.push_back(std::string(name) + ": unknown supporting post '" + pid + "'");
                }
            }
        }
    }
    for (const auto& [token, keys] : s.topic_index) {
        for (const auto& key : keys) {
            if (!s.topics.contains(key)) problems.push_back("topic_index: unknown topic '" + key + "'");
        }
    }
    return problems;
}

std::vector<std::string> check_bidirectional_symmetry(const GraphSnapshot& s) {
    std::vector<std::string> problems;
    ConnectionIndex index(s);
    auto reachable = [&](NodeKind kind, const std::string& id, Table t, const ConnectionRecord& row) {
        for (const auto& ref : index.at(kind, id)) {
            if (ref.table == t && ref.record->key() == row.key() && ref.record->relation == row.relation &&
                ref.record->score == row.score) {
                return true;
            }
        }
        return false;
    };
    for (Table t : all_tables()) {
        const auto& info = table_info(t);
        for (const auto& [key, row] : s.table(t)) {
            if (!reachable(row.left_kind, row.left_id, t, row) || !reachable(row.right_kind, row.right_id, t, row)) {
                problems.push_back(std::string(info.name) + ": row " + row.left_id + " -> " + row.right_id +
                                   " not reachable from both endpoints");
            }
            if (info.symmetric) {
                if (!(row.left_id < row.right_id)) {
                    problems.push_back(std::string(info.name) + ": symmetric row not in canonical order");
                }
                if (s.table(t).contains(ConnectionKey{row.right_id, row.left_id, row.relation})) {
                    problems.push_back(std::string(info.name) + ": both orientations stored");
                }
            }
        }
    }
    return problems;
}

std::vector<std::string> check_topic_annotation(const GraphSnapshot& s) {
    std::vector<std::string> problems;
    for (Table t : all_tables()) {
        const auto& info = table_info(t);
        for (const auto& [key, row] : s.table(t)) {
            std::optional<TopicType> expected;
            if (info.right == NodeKind::topic) {
                expected = topic_from_key(row.right_id).type;
            } else if (info.left == NodeKind::topic) {
                expected = topic_from_key(row.left_id).type;
            }
            if (row.topic_type != expected) {
                problems.push_back(std::string(info.name) + ": row " + row.left_id + " -> " + row.right_id +
                                   (expected ? " missing or wrong topic_type" : " carries a topic_type"));
            }
        }
    }
    return problems;
}

std::vector<std::string> validate_snapshot(const GraphSnapshot& s) {
    auto problems = check_referential_integrity(s);
    for (auto& p : check_bidirectional_symmetry(s)) problems.push_back(std::move(p));
    for (auto& p : check_topic_annotation(s)) problems.push_back(std::move(p));
    for (Table t : all_tables()) {
        const auto& info = table_info(t);
        for (const auto& [key, row] : s.table(t)) {
            if (row.left_kind != info.left || row.right_kind != info.right) {
                problems.push_back(std::string(info.name) + ": endpoint kinds do not match the table");
            }
            if (std::find(info.relations.begin(), info.relations.end(), row.relation) == info.relations.end()) {
                problems.push_back(std::string(info.name) + ": relation '" + std::string(to_string(row.relation)) +
                                   "' not allowed");
            }
            if (!(row.score >= 1.0)) problems.push_back(std::string(info.name) + ": score below 1");
            if (key != row.key()) problems.push_back(std::string(info.name) + ": key does not match row");
        }
    }
    for (const auto& [key, topic] : s.topics) {
        if (key != topic.topic.key()) problems.push_back("topics: key mismatch for '" + key + "'");
        if (topic.frequency < 1) problems.push_back("topics: zero frequency for '" + key + "'");
        bool vector_allowed = topic.topic.type == TopicType::hashtag || topic.topic.type == TopicType::entity;
        if (topic.contextual_vector && !vector_allowed) {
            problems.push_back("topics: contextual vector on " + std::string(to_string(topic.topic.type)) + " '" +
                               key + "'");
        }
        if ((topic.topic.type == TopicType::entity) != topic.topic.entity_class.has_value()) {
            problems.push_back("topics: entity_class mismatch for '" + key + "'");
        }
    }
    for (const auto& [id, post] : s.posts) {
        if (!(post.quality_score >= 0.0 && post.quality_score <= 1.0)) {
            problems.push_back("posts: quality out of range for '" + id + "'");
        }
    }
    return problems;
}

json to_json(const TermVector& v) {
    json terms = json::array();
    for (const auto& t : v.terms) {
        terms.push_back({{"term", t.term}, {"score", t.score}, {"components", t.components}, {"tf", t.tf}});
    }
    return {{"key", v.key}, {"terms", terms}};
}

TermVector term_vector_from_json(const json& j) {
    TermVector v;
    v.key = j.at("key").get<std::string>();
    for (const auto& t : j.at("terms")) {
        v.terms.push_back(ScoredTerm{t.at("term").get<std::string>(), t.at("score").get<double>(),
                                     t.at("components").get<std::map<std::string, double>>(),
                                     t.at("tf").get<std::uint64_t>()});
    }
    return v;
}

json to_json(const UserRecord& r) {
    json j = {{"user_id", r.user_id},
              {"screen_name", r.screen_name},
              {"display_name", r.display_name},
              {"authority_score", r.authority_score},
              {"followers_count", r.followers_count},
              {"verified", r.verified},
              {"main_score", r.main_score}};
    if (r.profile_image_url) j["profile_image_url"] = *r.profile_image_url;
    if (r.trusted_ring) j["trusted_ring"] = *r.trusted_ring;
    return j;
}

UserRecord user_record_from_json(const json& j) {
    UserRecord r;
    r.user_id = j.at("user_id").get<std::string>();
    r.screen_name = j.at("screen_name").get<std::string>();
    r.display_name = j.at("display_name").get<std::string>();
    r.profile_image_url = opt_string(j, "profile_image_url");
    r.authority_score = j.at("authority_score").get<double>();
    r.followers_count = j.at("followers_count").get<std::uint64_t>();
    r.verified = j.at("verified").get<bool>();
    if (j.contains("trusted_ring")) r.trusted_ring = j.at("trusted_ring").get<int>();
    r.main_score = j.at("main_score").get<double>();
    return r;
}

json to_json(const LinkRecord& r) {
    json j = {{"url", r.url},
              {"spam_score", r.spam_score},
              {"popularity", r.popularity},
              {"virality", r.virality},
              {"trending", r.trending},
              {"social_signature", to_json(r.social_signature)},
              {"first_seen", format_iso8601(r.first_seen)},
              {"main_score", r.main_score}};
    if (r.title) j["title"] = *r.title;
    if (r.description) j["description"] = *r.description;
    return j;
}

LinkRecord link_record_from_json(const json& j) {
    LinkRecord r;
    r.url = j.at("url").get<std::string>();
    r.title = opt_string(j, "title");
    r.description = opt_string(j, "description");
    r.spam_score = j.at("spam_score").get<double>();
    r.popularity = j.at("popularity").get<std::uint64_t>();
    r.virality = j.at("virality").get<double>();
    r.trending = j.at("trending").get<double>();
    r.social_signature = term_vector_from_json(j.at("social_signature"));
    r.first_seen = parse_iso8601(j.at("first_seen").get<std::string>());
    r.main_score = j.at("main_score").get<double>();
    return r;
}

json to_json(const TopicRecord& r) {
    json j = {{"key", r.topic.key()},
              {"topic_type", to_string(r.topic.type)},
              {"text", r.topic.text},
              {"frequency", r.frequency},
              {"trending", r.trending},
              {"first_seen", format_iso8601(r.first_seen)},
              {"main_score", r.main_score}};
    if (r.topic.entity_class) j["entity_class"] = to_string(*r.topic.entity_class);
    if (r.contextual_vector) j["contextual_vector"] = to_json(*r.contextual_vector);
    return j;
}

TopicRecord topic_record_from_json(const json& j) {
    TopicRecord r;
    r.topic.type = parse_topic_type(j.at("topic_type").get<std::string>());
    r.topic.text = j.at("text").get<std::string>();
    if (auto cls = opt_string(j, "entity_class")) r.topic.entity_class = parse_entity_class(*cls);
    r.frequency = j.at("frequency").get<std::uint64_t>();
    r.trending = j.at("trending").get<double>();
    if (j.contains("contextual_vector")) r.contextual_vector = term_vector_from_json(j.at("contextual_vector"));
    r.first_seen = parse_iso8601(j.at("first_seen").get<std::string>());
    r.main_score = j.at("main_score").get<double>();
    return r;
}

json to_json(const PostRecord& r) {
    return {{"post_id", r.post_id},
            {"author_id", r.author_id},
            {"timestamp", format_iso8601(r.timestamp)},
            {"text", r.text},
            {"retweet_count", r.retweet_count},
            {"favorite_count", r.favorite_count},
            {"quality_score", r.quality_score},
            {"main_score", r.main_score}};
}

PostRecord post_record_from_json(const json& j) {
    PostRecord r;
    r.post_id = j.at("post_id").get<std::string>();
    r.author_id = j.at("author_id").get<std::string>();
    r.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
    r.text = j.at("text").get<std::string>();
    r.retweet_count = j.at("retweet_count").get<std::uint64_t>();
    r.favorite_count = j.at("favorite_count").get<std::uint64_t>();
    r.quality_score = j.at("quality_score").get<double>();
    r.main_score = j.at("main_score").get<double>();
    return r;
}

json to_json(const ConnectionRecord& r) {
    json j = {{"left_id", r.left_id},
              {"right_id", r.right_id},
              {"left_kind", to_string(r.left_kind)},
              {"right_kind", to_string(r.right_kind)},
              {"relation", to_string(r.relation)},
              {"score", r.score},
              {"supporting_post_ids", r.supporting_post_ids},
              {"post_count", r.post_count},
              {"active_days", r.active_days}};
    if (r.topic_type) j["topic_type"] = to_string(*r.topic_type);
    if (r.timestamp) j["timestamp"] = format_iso8601(*r.timestamp);
    return j;
}

ConnectionRecord connection_from_json(const json& j) {
    ConnectionRecord r;
    r.left_id = j.at("left_id").get<std::string>();
    r.right_id = j.at("right_id").get<std::string>();
    r.left_kind = parse_node_kind(j.at("left_kind").get<std::string>());
    r.right_kind = parse_node_kind(j.at("right_kind").get<std::string>());
    r.relation = parse_relation(j.at("relation").get<std::string>());
    if (auto tt = opt_string(j, "topic_type")) r.topic_type = parse_topic_type(*tt);
    r.score = j.at("score").get<double>();
    r.supporting_post_ids = j.at("supporting_post_ids").get<std::vector<std::string>>();
    if (auto ts = opt_string(j, "timestamp")) r.timestamp = parse_iso8601(*ts);
    r.post_count = j.at("post_count").get<std::uint64_t>();
    r.active_days = j.at("active_days").get<std::uint64_t>();
    return r;
}

}  // namespace skg

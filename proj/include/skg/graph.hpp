#pragma once

#include "skg/diffusion.hpp"
#include "skg/extract.hpp"
#include "skg/ingest.hpp"
#include "skg/signatures.hpp"
#include "skg/time.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace skg {

enum class NodeKind { user, link, topic, post };
enum class Relation { authored, coreferenced, mentioned, replied, retweeted, fanOrAuthority, cooccurred };

std::string_view to_string(NodeKind k);
std::string_view to_string(Relation r);
NodeKind parse_node_kind(std::string_view text);
Relation parse_relation(std::string_view text);

// The nine connection tables, in file order.
enum class Table { users_links, users_topics, users_users, links_topics, topics_topics, links_links,
                   users_posts, links_posts, topics_posts };
inline constexpr std::size_t kTableCount = 9;

struct TableInfo {
    Table table;
    std::string_view name;
    NodeKind left;
    NodeKind right;
    std::vector<Relation> relations;
    bool symmetric;  // undirected; rows stored with left_id < right_id
};

const TableInfo& table_info(Table t);
const std::array<Table, kTableCount>& all_tables();
Table table_for(NodeKind left, NodeKind right);

struct UserRecord {
    std::string user_id;
    std::string screen_name;
    std::string display_name;
    std::optional<std::string> profile_image_url;
    double authority_score = 0.0;
    std::uint64_t followers_count = 0;
    bool verified = false;
    std::optional<int> trusted_ring;
    double main_score = 0.0;

    bool operator==(const UserRecord&) const = default;
};

struct LinkRecord {
    std::string url;
    std::optional<std::string> title;
    std::optional<std::string> description;
    double spam_score = 0.0;
    std::uint64_t popularity = 0;
    double virality = 0.0;
    double trending = 0.0;
    SocialSignature social_signature;
    Instant first_seen;
    double main_score = 0.0;

    bool operator==(const LinkRecord&) const = default;
};

struct TopicRecord {
    Topic topic;
    std::uint64_t frequency = 0;  // distinct accounts
    double trending = 0.0;
    std::optional<ContextualVector> contextual_vector;  // hashtags and entities only
    Instant first_seen;
    double main_score = 0.0;

    bool operator==(const TopicRecord&) const = default;
};

struct PostRecord {
    std::string post_id;
    std::string author_id;
    Instant timestamp;
    std::string text;
    std::uint64_t retweet_count = 0;
    std::uint64_t favorite_count = 0;
    double quality_score = 0.0;
    double main_score = 0.0;

    bool operator==(const PostRecord&) const = default;
};

struct ConnectionKey {
    std::string left_id;
    std::string right_id;
    Relation relation = Relation::cooccurred;

    auto operator<=>(const ConnectionKey&) const = default;
};

struct ConnectionRecord {
    std::string left_id;
    std::string right_id;
    NodeKind left_kind = NodeKind::user;
    NodeKind right_kind = NodeKind::user;
    Relation relation = Relation::cooccurred;
    std::optional<TopicType> topic_type;  // type of the (right-hand) topic endpoint
    double score = 0.0;                   // distinct contributing accounts
    std::vector<std::string> supporting_post_ids;
    std::optional<Instant> timestamp;  // post connections only
    std::uint64_t post_count = 0;      // distinct contributing posts
    std::uint64_t active_days = 0;     // distinct UTC days with a contribution

    ConnectionKey key() const { return {left_id, right_id, relation}; }
    bool operator==(const ConnectionRecord&) const = default;
};

using ConnectionTable = std::map<ConnectionKey, ConnectionRecord>;
using TopicTokenIndex = std::map<std::string, std::set<std::string>>;

struct Manifest {
    std::string build_version;
    std::map<std::string, std::uint64_t> counts;
    nlohmann::json parameters = nlohmann::json::object();

    bool operator==(const Manifest&) const = default;
};

inline constexpr const char* kBuildVersion = "skg-1.0";

struct GraphSnapshot {
    Interval interval;
    std::map<std::string, UserRecord> users;
    std::map<std::string, LinkRecord> links;
    std::map<std::string, TopicRecord> topics;  // keyed by Topic::key()
    std::map<std::string, PostRecord> posts;
    std::array<ConnectionTable, kTableCount> connections;
    TopicTokenIndex topic_index;
    TrendHistory trend_history;
    Manifest manifest;

    ConnectionTable& table(Table t) { return connections[static_cast<std::size_t>(t)]; }
    const ConnectionTable& table(Table t) const { return connections[static_cast<std::size_t>(t)]; }
    bool has_node(NodeKind kind, const std::string& id) const;

    bool operator==(const GraphSnapshot&) const = default;
};

// Recomputes manifest counts from the tables.
void refresh_manifest_counts(GraphSnapshot& s);

// --- scores -----------------------------------------------------------------

// (1 - spam) * author authority * (1 - adult), clamped to [0,1].
double post_quality(const Post& post, const UserProfile& author);
double user_main_score(double authority, std::uint64_t followers);
double link_main_score(std::uint64_t popularity, double spam_score);
double topic_main_score(std::uint64_t frequency);
double post_main_score(double quality, std::uint64_t retweets, std::uint64_t favorites);

// Post ordering for example and supporting post selection: main score desc,
// newer first, then post id.
struct PostRank {
    double main_score = 0.0;
    Instant timestamp;
};
using PostRanks = std::unordered_map<std::string, PostRank>;
std::vector<std::string> top_posts(std::vector<std::string> post_ids, const PostRanks& ranks, std::size_t k);

// --- connections --------------------------------------------------------------

struct Selection {
    std::set<std::string> users;
    std::set<std::string> links;
    std::set<std::string> topics;  // topic keys
};

// Builds the six element-to-element tables. Each row's score counts distinct
// authors of the contributing posts; supporting posts are the top `k_posts`
// contributing posts. `post_topics[i]` holds the topics of `posts[i]`.
void build_connections(const std::vector<Post>& posts, const std::vector<std::vector<Topic>>& post_topics,
                       const Selection& selected, const PostRanks& ranks, std::size_t k_posts,
                       GraphSnapshot& out);

struct UserTopicActivity {
    std::string user_id;
    std::string topic_key;
    std::uint64_t active_days = 0;
    std::uint64_t post_count = 0;
};

struct FanParams {
    std::uint64_t min_days = 3;
    double top_fraction = 0.05;
};

// (user, topic) pairs active on >= min_days days whose post count ranks within
// the top ceil(top_fraction * users-of-topic) users of that topic (at least one).
std::set<std::pair<std::string, std::string>> detect_fan_or_authority(const std::vector<UserTopicActivity>& activity,
                                                                      const FanParams& params);

// Adds fanOrAuthority rows for the pairs detected over the authored
// users_topics rows, replacing any existing ones.
void label_fan_or_authority(GraphSnapshot& s, const FanParams& params);

// token -> full topic keys containing it.
TopicTokenIndex cluster_topics(const std::map<std::string, TopicRecord>& topics);
std::vector<std::string> topic_tokens(const Topic& topic);

// Adds the top-k associated posts of every selected element to the Posts
// table together with their users_posts/links_posts/topics_posts rows.
// Returns the ids of the chosen example posts.
std::set<std::string> select_posts(const Selection& selected, const std::vector<Post>& posts,
                                   const std::vector<std::vector<Topic>>& post_topics, const PostRanks& ranks,
                                   std::size_t k_posts, GraphSnapshot& out);

// --- invariants ---------------------------------------------------------------

struct ConnectionRef {
    Table table;
    const ConnectionRecord* record;
};

// Every connection reachable from both of its endpoints.
class ConnectionIndex {
public:
    explicit ConnectionIndex(const GraphSnapshot& s);

    const std::vector<ConnectionRef>& at(NodeKind kind, const std::string& id) const;

private:
    std::map<std::pair<NodeKind, std::string>, std::vector<ConnectionRef>> by_node_;
    std::vector<ConnectionRef> empty_;
};

std::vector<std::string> check_referential_integrity(const GraphSnapshot& s);
std::vector<std::string> check_bidirectional_symmetry(const GraphSnapshot& s);
std::vector<std::string> check_topic_annotation(const GraphSnapshot& s);
// All of the above plus the relation vocabulary and score >= 1.
std::vector<std::string> validate_snapshot(const GraphSnapshot& s);

// --- serialization ------------------------------------------------------------

nlohmann::json to_json(const TermVector& v);
TermVector term_vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const UserRecord& r);
nlohmann::json to_json(const LinkRecord& r);
nlohmann::json to_json(const TopicRecord& r);
nlohmann::json to_json(const PostRecord& r);
nlohmann::json to_json(const ConnectionRecord& r);
UserRecord user_record_from_json(const nlohmann::json& j);
LinkRecord link_record_from_json(const nlohmann::json& j);
TopicRecord topic_record_from_json(const nlohmann::json& j);
PostRecord post_record_from_json(const nlohmann::json& j);
ConnectionRecord connection_from_json(const nlohmann::json& j);

}  // namespace skg

#pragma once

#include "skg/time.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace skg {

struct Post {
    std::string post_id;
    std::string author_id;
    Instant timestamp;
    std::string text;
    std::vector<std::string> mentioned_user_ids;
    std::optional<std::string> reply_to_user_id;
    std::optional<std::string> retweet_of_post_id;
    std::optional<std::string> retweet_of_user_id;
    std::vector<std::string> link_urls;
    std::uint64_t retweet_count = 0;
    std::uint64_t favorite_count = 0;
    double spam_score = 0.0;
    double adult_score = 0.0;
    double profanity_score = 0.0;

    bool is_retweet() const { return retweet_of_post_id.has_value() || retweet_of_user_id.has_value(); }
    bool operator==(const Post&) const = default;
};

struct UserProfile {
    std::string user_id;
    std::string screen_name;
    std::string display_name;
    bool verified = false;
    bool is_protected = false;  // "protected" on the wire
    std::uint64_t followers_count = 0;
    double authority_score = 0.0;
    double spam_score = 0.0;
    double adult_score = 0.0;
    std::optional<std::string> profile_image_url;

    bool operator==(const UserProfile&) const = default;
};

struct LinkMetadata {
    std::string url;
    std::optional<std::string> title;
    std::optional<std::string> description;
    double spam_score = 0.0;
    double adult_score = 0.0;

    bool operator==(const LinkMetadata&) const = default;
};

struct FilterThresholds {
    double max_spam = 0.5;
    double max_adult = 0.5;
    double max_profanity = 0.5;
    double min_user_authority = 0.0;
    double max_user_adult = 0.5;
    std::uint64_t min_followers = 0;

    // Throws ValidationError naming the offending bound.
    void validate() const;
};

using UserMap = std::map<std::string, UserProfile>;
using LinkMap = std::map<std::string, LinkMetadata>;

template <typename T>
struct ParseResult {
    std::vector<T> records;
    std::size_t skipped = 0;
};

// Lowercases scheme and host, drops the fragment and a trailing slash, keeps the query.
std::string canonicalize_url(std::string_view url);

// Line-delimited JSON readers. Malformed lines are logged and counted, never fatal.
ParseResult<Post> parse_posts(std::istream& in);
ParseResult<UserProfile> parse_users(std::istream& in);
ParseResult<LinkMetadata> parse_links(std::istream& in);

// File variants; throw IoError when the file cannot be opened.
ParseResult<Post> load_posts(const std::filesystem::path& path);
UserMap load_users(const std::filesystem::path& path);
LinkMap load_links(const std::filesystem::path& path);

nlohmann::json to_json(const Post& post);
nlohmann::json to_json(const UserProfile& user);
nlohmann::json to_json(const LinkMetadata& link);

bool user_passes(const UserProfile& user, bool trusted, const FilterThresholds& t);

std::set<std::string> select_users(const UserMap& users, const std::set<std::string>& trusted,
                                   const FilterThresholds& t);

// Quality filter over posts and their links, plus the author selection rule.
// Output preserves input order.
std::vector<Post> filter_posts(const std::vector<Post>& posts, const UserMap& users, const LinkMap& links,
                               const FilterThresholds& t, const std::set<std::string>& trusted = {});

}  // namespace skg

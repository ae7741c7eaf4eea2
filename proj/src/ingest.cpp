#include "skg/ingest.hpp"

#include "skg/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace skg {
namespace {

using nlohmann::json;

// Thrown while decoding a single line; turned into a skip by the caller.
struct BadRecord {
    std::string reason;
};

const json* field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string required_string(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v || !v->is_string() || v->get_ref<const std::string&>().empty()) {
        throw BadRecord{std::string("missing or empty '") + name + "'"};
    }
    return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw BadRecord{std::string("'") + name + "' is not a string"};
    return v->get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v) return {};
    if (!v->is_array()) throw BadRecord{std::string("'") + name + "' is not a list"};
    std::vector<std::string> out;
    for (const auto& item : *v) {
        if (!item.is_string()) throw BadRecord{std::string("'") + name + "' has a non-string entry"};
        out.push_back(item.get<std::string>());
    }
    return out;
}

double score(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v) return 0.0;
    if (!v->is_number()) throw BadRecord{std::string("'") + name + "' is not a number"};
    double s = v->get<double>();
    if (!(s >= 0.0 && s <= 1.0)) throw BadRecord{std::string("'") + name + "' outside [0,1]"};
    return s;
}

std::uint64_t count(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v) return 0;
    if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
        throw BadRecord{std::string("'") + name + "' is not a non-negative integer"};
    }
    return v->get<std::uint64_t>();
}

bool flag(const json& obj, const char* name) {
    const json* v = field(obj, name);
    if (!v) return false;
    if (!v->is_boolean()) throw BadRecord{std::string("'") + name + "' is not a boolean"};
    return v->get<bool>();
}

Post decode_post(const json& obj) {
    Post p;
    p.post_id = required_string(obj, "post_id");
    p.author_id = required_string(obj, "author_id");
    try {
        p.timestamp = parse_iso8601(required_string(obj, "timestamp"));
    } catch (const ValidationError& e) {
        throw BadRecord{e.what()};
    }
    const json* text = field(obj, "text");
    if (!text || !text->is_string()) throw BadRecord{"missing 'text'"};
    p.text = text->get<std::string>();
    p.mentioned_user_ids = string_list(obj, "mentioned_user_ids");
    p.reply_to_user_id = optional_string(obj, "reply_to_user_id");
    p.retweet_of_post_id = optional_string(obj, "retweet_of_post_id");
    p.retweet_of_user_id = optional_string(obj, "retweet_of_user_id");
    for (const auto& url : string_list(obj, "link_urls")) p.link_urls.push_back(canonicalize_url(url));
    p.retweet_count = count(obj, "retweet_count");
    p.favorite_count = count(obj, "favorite_count");
    p.spam_score = score(obj, "spam_score");
    p.adult_score = score(obj, "adult_score");
    p.profanity_score = score(obj, "profanity_score");
    if (p.retweet_of_post_id && *p.retweet_of_post_id == p.post_id) throw BadRecord{"post retweets itself"};
    return p;
}

UserProfile decode_user(const json& obj) {
    UserProfile u;
    u.user_id = required_string(obj, "user_id");
    u.screen_name = optional_string(obj, "screen_name").value_or("");
    u.display_name = optional_string(obj, "display_name").value_or("");
    u.verified = flag(obj, "verified");
    u.is_protected = flag(obj, "protected");
    u.followers_count = count(obj, "followers_count");
    u.authority_score = score(obj, "authority_score");
    u.spam_score = score(obj, "spam_score");
    u.adult_score = score(obj, "adult_score");
    u.profile_image_url = optional_string(obj, "profile_image_url");
    return u;
}

LinkMetadata decode_link(const json& obj) {
    LinkMetadata l;
    l.url = canonicalize_url(required_string(obj, "url"));
    l.title = optional_string(obj, "title");
    l.description = optional_string(obj, "description");
    l.spam_score = score(obj, "spam_score");
    l.adult_score = score(obj, "adult_score");
    return l;
}

template <typename T, typename Decode, typename KeyOf>
ParseResult<T> parse_lines(std::istream& in, const char* what, Decode decode, KeyOf key_of) {
    ParseResult<T> result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
        json obj = json::parse(line, nullptr, false);
        try {
            if (obj.is_discarded() || !obj.is_object()) throw BadRecord{"not a JSON object"};
            T record = decode(obj);
            if (!seen.insert(key_of(record)).second) throw BadRecord{"duplicate key '" + key_of(record) + "'"};
            result.records.push_back(std::move(record));
        } catch (const BadRecord& bad) {
            ++result.skipped;
            spdlog::warn("{} line {} skipped: {}", what, line_no, bad.reason);
        }
    }
    if (in.bad()) throw IoError(std::string("read failure in ") + what + " stream");
    return result;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

void FilterThresholds::validate() const {
    auto unit = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name, std::string(name) + " must lie in [0,1]");
    };
    unit(max_spam, "max_spam");
    unit(max_adult, "max_adult");
    unit(max_profanity, "max_profanity");
    unit(min_user_authority, "min_user_authority");
    unit(max_user_adult, "max_user_adult");
}

std::string canonicalize_url(std::string_view url) {
    std::string out(url);
    if (auto hash = out.find('#'); hash != std::string::npos) out.erase(hash);

    std::size_t host_begin = 0;
    if (auto scheme_end = out.find("://"); scheme_end != std::string::npos) {
        std::transform(out.begin(), out.begin() + scheme_end, out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        host_begin = scheme_end + 3;
    }
    std::size_t host_end = out.find_first_of("/?", host_begin);
    if (host_end == std::string::npos) host_end = out.size();
    std::transform(out.begin() + host_begin, out.begin() + host_end, out.begin() + host_begin,
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    std::size_t query = out.find('?', host_begin);
    std::size_t path_end = query == std::string::npos ? out.size() : query;
    while (path_end > host_begin && out[path_end - 1] == '/') {
        out.erase(path_end - 1, 1);
        --path_end;
    }
    return out;
}

ParseResult<Post> parse_posts(std::istream& in) {
    return parse_lines<Post>(in, "posts", decode_post, [](const Post& p) { return p.post_id; });
}

ParseResult<UserProfile> parse_users(std::istream& in) {
    return parse_lines<UserProfile>(in, "users", decode_user, [](const UserProfile& u) { return u.user_id; });
}

ParseResult<LinkMetadata> parse_links(std::istream& in) {
    return parse_lines<LinkMetadata>(in, "links", decode_link, [](const LinkMetadata& l) { return l.url; });
}

ParseResult<Post> load_posts(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_posts(in);
}

UserMap load_users(const std::filesystem::path& path) {
    auto in = open_input(path);
    UserMap out;
    for (auto& u : parse_users(in).records) out.emplace(u.user_id, std::move(u));
    return out;
}

LinkMap load_links(const std::filesystem::path& path) {
    auto in = open_input(path);
    LinkMap out;
    for (auto& l : parse_links(in).records) out.emplace(l.url, std::move(l));
    return out;
}

nlohmann::json to_json(const Post& p) {
    json j = {{"post_id", p.post_id},
              {"author_id", p.author_id},
              {"timestamp", format_iso8601(p.timestamp)},
              {"text", p.text},
              {"mentioned_user_ids", p.mentioned_user_ids},
              {"link_urls", p.link_urls},
              {"retweet_count", p.retweet_count},
              {"favorite_count", p.favorite_count},
              {"spam_score", p.spam_score},
              {"adult_score", p.adult_score},
              {"profanity_score", p.profanity_score}};
    if (p.reply_to_user_id) j["reply_to_user_id"] = *p.reply_to_user_id;
    if (p.retweet_of_post_id) j["retweet_of_post_id"] = *p.retweet_of_post_id;
    if (p.retweet_of_user_id) j["retweet_of_user_id"] = *p.retweet_of_user_id;
    return j;
}

nlohmann::json to_json(const UserProfile& u) {
    json j = {{"user_id", u.user_id},
              {"screen_name", u.screen_name},
              {"display_name", u.display_name},
              {"verified", u.verified},
              {"protected", u.is_protected},
              {"followers_count", u.followers_count},
              {"authority_score", u.authority_score},
              {"spam_score", u.spam_score},
              {"adult_score", u.adult_score}};
    if (u.profile_image_url) j["profile_image_url"] = *u.profile_image_url;
    return j;
}

nlohmann::json to_json(const LinkMetadata& l) {
    json j = {{"url", l.url}, {"spam_score", l.spam_score}, {"adult_score", l.adult_score}};
    if (l.title) j["title"] = *l.title;
    if (l.description) j["description"] = *l.description;
    return j;
}

bool user_passes(const UserProfile& user, bool trusted, const FilterThresholds& t) {
    return !user.is_protected && (user.verified || trusted) && user.authority_score >= t.min_user_authority &&
           user.adult_score <= t.max_user_adult && user.followers_count >= t.min_followers;
}

std::set<std::string> select_users(const UserMap& users, const std::set<std::string>& trusted,
                                   const FilterThresholds& t) {
    std::set<std::string> out;
    for (const auto& [id, user] : users) {
        if (user_passes(user, trusted.contains(id), t)) out.insert(id);
    }
    return out;
}

std::vector<Post> filter_posts(const std::vector<Post>& posts, const UserMap& users, const LinkMap& links,
                               const FilterThresholds& t, const std::set<std::string>& trusted) {
    std::vector<Post> out;
    for (const auto& post : posts) {
        if (post.spam_score > t.max_spam || post.adult_score > t.max_adult || post.profanity_score > t.max_profanity) {
            continue;
        }
        bool links_ok = std::all_of(post.link_urls.begin(), post.link_urls.end(), [&](const std::string& url) {
            auto it = links.find(url);
            if (it == links.end()) return true;
            return it->second.spam_score <= t.max_spam && it->second.adult_score <= t.max_adult;
        });
        if (!links_ok) continue;
        auto author = users.find(post.author_id);
        if (author == users.end() || !user_passes(author->second, trusted.contains(post.author_id), t)) continue;
        out.push_back(post);
    }
    return out;
}

}  // namespace skg

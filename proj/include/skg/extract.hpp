#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace skg {

enum class TopicType { hashtag, cashtag, entity, ngram };
enum class EntityClass { person, place, organization };

std::string_view to_string(TopicType t);
std::string_view to_string(EntityClass c);
TopicType parse_topic_type(std::string_view text);
EntityClass parse_entity_class(std::string_view text);

struct Topic {
    TopicType type = TopicType::ngram;
    std::string text;
    std::optional<EntityClass> entity_class;  // entities only

    // Stable identifier used as the Topics table primary key, e.g. "hashtag:#tax".
    std::string key() const;

    auto operator<=>(const Topic&) const = default;
};

// Inverse of Topic::key(). Throws ValidationError on an unknown prefix.
Topic topic_from_key(std::string_view key);

class StopWords {
public:
    // A small bundled English list.
    static StopWords english();
    // One word per line; blank lines and '#' comments ignored.
    static StopWords load(const std::filesystem::path& path);

    explicit StopWords(std::set<std::string> words) : words_(std::move(words)) {}

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const { return words_.size(); }

private:
    std::set<std::string> words_;
};

struct Gazetteer {
    std::map<std::string, EntityClass> entries;  // normalized surface -> class
    std::size_t max_entry_tokens = 0;

    void add(std::string_view surface, EntityClass c);

    static Gazetteer demo();
    // `surface<TAB>class` lines, UTF-8.
    static Gazetteer load(const std::filesystem::path& path);
};

// Removes URLs and @handles from `text`, keeping everything else. Runs of
// whitespace collapse to a single space; the result is trimmed.
std::string strip_links_and_handles(std::string_view text);

// Lowercased word tokens in order. Word characters are ASCII alphanumerics,
// '_' and any non-ASCII byte (so UTF-8 sequences stay inside words).
std::vector<std::string> word_tokens(std::string_view text);

// word_tokens over the text with links and handles removed, minus stop words.
std::vector<std::string> clean_tokens(std::string_view text, const StopWords& stop);

std::vector<Topic> extract_hashtags(std::string_view text);
std::vector<Topic> extract_cashtags(std::string_view text);

// Every contiguous n-gram, 1 <= n <= n_max, with repeats. Order: by start, then length.
std::vector<std::string> enumerate_ngrams(const std::vector<std::string>& tokens, std::size_t n_max);
// As enumerate_ngrams, de-duplicated within the token list, as ngram Topics.
std::vector<Topic> extract_ngrams(const std::vector<std::string>& tokens, std::size_t n_max = 3);

// Greedy longest match, left to right; matched tokens are consumed.
std::vector<Topic> extract_entities(const std::vector<std::string>& tokens, const Gazetteer& g);

struct ExtractOptions {
    std::size_t n_max = 3;
};

// All topics of one post, de-duplicated by key, in a deterministic order:
// hashtags, cashtags, entities, n-grams.
std::vector<Topic> extract_topics(std::string_view text, const StopWords& stop, const Gazetteer& g,
                                  const ExtractOptions& options = {});

}  // namespace skg

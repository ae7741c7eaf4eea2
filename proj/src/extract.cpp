#include "skg/extract.hpp"

#include "skg/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace skg {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

char lower(unsigned char c) { return static_cast<char>(std::tolower(c)); }

bool starts_with_icase(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (lower(text[i]) != prefix[i]) return false;
    }
    return true;
}

bool is_url_token(std::string_view token) {
    return starts_with_icase(token, "http://") || starts_with_icase(token, "https://") ||
           starts_with_icase(token, "www.");
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out += ' ';
        out += tokens[i];
    }
    return out;
}

// Tags introduced by `sigil`: the sigil must start the text or follow a non-word byte.
template <typename Accept>
std::vector<Topic> extract_tags(std::string_view text, char sigil, TopicType type, Accept accept) {
    std::string stripped = strip_links_and_handles(text);
    std::vector<Topic> out;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
        if (stripped[i] != sigil) continue;
        if (i > 0 && is_word_byte(stripped[i - 1])) continue;
        std::size_t j = i + 1;
        while (j < stripped.size() && is_word_byte(stripped[j])) ++j;
        std::string_view body(stripped.data() + i + 1, j - i - 1);
        if (body.empty() || !accept(body)) continue;
        std::string tag(1, sigil);
        for (char c : body) tag += lower(c);
        if (seen.insert(tag).second) out.push_back(Topic{type, tag, std::nullopt});
        i = j - 1;
    }
    return out;
}

}  // namespace

std::string_view to_string(TopicType t) {
    switch (t) {
        case TopicType::hashtag: return "hashtag";
        case TopicType::cashtag: return "cashtag";
        case TopicType::entity: return "entity";
        case TopicType::ngram: return "ngram";
    }
    return "ngram";
}

std::string_view to_string(EntityClass c) {
    switch (c) {
        case EntityClass::person: return "person";
        case EntityClass::place: return "place";
        case EntityClass::organization: return "organization";
    }
    return "person";
}

TopicType parse_topic_type(std::string_view text) {
    if (text == "hashtag") return TopicType::hashtag;
    if (text == "cashtag") return TopicType::cashtag;
    if (text == "entity") return TopicType::entity;
    if (text == "ngram") return TopicType::ngram;
    throw ValidationError("topic_type", "unknown topic type '" + std::string(text) + "'");
}

EntityClass parse_entity_class(std::string_view text) {
    if (text == "person") return EntityClass::person;
    if (text == "place") return EntityClass::place;
    if (text == "organization") return EntityClass::organization;
    throw ValidationError("entity_class", "unknown entity class '" + std::string(text) + "'");
}

std::string Topic::key() const { return std::string(to_string(type)) + ":" + text; }

Topic topic_from_key(std::string_view key) {
    auto colon = key.find(':');
    if (colon == std::string_view::npos) throw ValidationError("topic", "malformed topic key '" + std::string(key) + "'");
    return Topic{parse_topic_type(key.substr(0, colon)), std::string(key.substr(colon + 1)), std::nullopt};
}

StopWords StopWords::english() {
    static const char* const kWords[] = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are", "as", "at",
        "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could",
        "did", "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has",
        "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor",
        "not", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
        "own", "rt", "s", "same", "she", "should", "so", "some", "such", "t", "than", "that", "the", "their",
        "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through", "to",
        "too", "under", "until", "up", "very", "via", "was", "we", "were", "what", "when", "where", "which",
        "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
        "yourselves"};
    return StopWords(std::set<std::string>(std::begin(kWords), std::end(kWords)));
}

StopWords StopWords::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stop-word list '" + path.string() + "'");
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto tokens = word_tokens(line);
        if (line.starts_with('#') || tokens.empty()) continue;
        words.insert(tokens.front());
    }
    return StopWords(std::move(words));
}

void Gazetteer::add(std::string_view surface, EntityClass c) {
    auto tokens = word_tokens(surface);
    if (tokens.empty()) return;
    entries[join(tokens, 0, tokens.size())] = c;
    max_entry_tokens = std::max(max_entry_tokens, tokens.size());
}

Gazetteer Gazetteer::demo() {
    Gazetteer g;
    const std::pair<const char*, EntityClass> entries[] = {
        {"barack obama", EntityClass::person},    {"donald trump", EntityClass::person},
        {"trump", EntityClass::person},           {"paul ryan", EntityClass::person},
        {"mitch mcconnell", EntityClass::person}, {"senate", EntityClass::organization},
        {"congress", EntityClass::organization},  {"microsoft", EntityClass::organization},
        {"irs", EntityClass::organization},       {"usa", EntityClass::place},
        {"new york", EntityClass::place},         {"new york city", EntityClass::place},
        {"washington", EntityClass::place},       {"california", EntityClass::place}};
    for (const auto& [surface, cls] : entries) g.add(surface, cls);
    return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open gazetteer '" + path.string() + "'");
    Gazetteer g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.starts_with('#')) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw LoadError(path.string(), line_no, "expected surface<TAB>class");
        try {
            g.add(std::string_view(line).substr(0, tab), parse_entity_class(std::string_view(line).substr(tab + 1)));
        } catch (const ValidationError& e) {
            throw LoadError(path.string(), line_no, e.what());
        }
    }
    return g;
}

std::string strip_links_and_handles(std::string_view text) {
    std::string out;
    std::size_t i = 0;
    bool pending_space = false;
    while (i < text.size()) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            pending_space = !out.empty();
            ++i;
            continue;
        }
        std::size_t token_end = i;
        while (token_end < text.size() && !std::isspace(static_cast<unsigned char>(text[token_end]))) ++token_end;
        std::string_view token = text.substr(i, token_end - i);
        if (is_url_token(token)) {
            i = token_end;
            continue;
        }
        // Copy the token, dropping any @handle that does not sit inside a word.
        std::string kept;
        for (std::size_t j = 0; j < token.size();) {
            if (token[j] == '@' && (j == 0 || !is_word_byte(token[j - 1])) && j + 1 < token.size() &&
                is_word_byte(token[j + 1])) {
                ++j;
                while (j < token.size() && is_word_byte(token[j])) ++j;
                continue;
            }
            kept += token[j++];
        }
        if (!kept.empty()) {
            if (pending_space) out += ' ';
            out += kept;
            pending_space = false;
        }
        i = token_end;
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current += lower(c);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::vector<std::string> clean_tokens(std::string_view text, const StopWords& stop) {
    auto tokens = word_tokens(strip_links_and_handles(text));
    std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
    return tokens;
}

std::vector<Topic> extract_hashtags(std::string_view text) {
    return extract_tags(text, '#', TopicType::hashtag, [](std::string_view) { return true; });
}

std::vector<Topic> extract_cashtags(std::string_view text) {
    return extract_tags(text, '$', TopicType::cashtag, [](std::string_view body) {
        return body.size() <= 6 &&
               std::all_of(body.begin(), body.end(), [](unsigned char c) { return c < 0x80 && std::isalpha(c); });
    });
}

std::vector<std::string> enumerate_ngrams(const std::vector<std::string>& tokens, std::size_t n_max) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        for (std::size_t n = 1; n <= n_max && i + n <= tokens.size(); ++n) out.push_back(join(tokens, i, i + n));
    }
    return out;
}

std::vector<Topic> extract_ngrams(const std::vector<std::string>& tokens, std::size_t n_max) {
    if (n_max < 1) throw ValidationError("n_max", "n_max must be >= 1");
    std::vector<Topic> out;
    std::unordered_set<std::string> seen;
    for (auto& gram : enumerate_ngrams(tokens, n_max)) {
        if (seen.insert(gram).second) out.push_back(Topic{TopicType::ngram, std::move(gram), std::nullopt});
    }
    return out;
}

std::vector<Topic> extract_entities(const std::vector<std::string>& tokens, const Gazetteer& g) {
    std::vector<Topic> out;
    std::unordered_set<std::string> seen;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t longest = std::min(g.max_entry_tokens, tokens.size() - i);
        bool matched = false;
        for (std::size_t n = longest; n >= 1; --n) {
            std::string surface = join(tokens, i, i + n);
            auto it = g.entries.find(surface);
            if (it == g.entries.end()) continue;
            if (seen.insert(surface).second) out.push_back(Topic{TopicType::entity, surface, it->second});
            i += n;
            matched = true;
            break;
        }
        if (!matched) ++i;
    }
    return out;
}

std::vector<Topic> extract_topics(std::string_view text, const StopWords& stop, const Gazetteer& g,
                                  const ExtractOptions& options) {
    std::vector<Topic> out = extract_hashtags(text);
    auto append = [&out](std::vector<Topic> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    append(extract_cashtags(text));
    // Entities match against unfiltered tokens so surfaces containing stop words still hit.
    append(extract_entities(word_tokens(strip_links_and_handles(text)), g));
    append(extract_ngrams(clean_tokens(text, stop), options.n_max));
    return out;
}

}  // namespace skg

#include "skg/corpus.hpp"

#include "skg/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace skg {
namespace {

struct Theme {
    const char* name;
    std::vector<const char*> hashtags;
    std::vector<const char*> cashtags;
    std::vector<const char*> phrases;
    std::vector<const char*> entities;
    std::vector<const char*> titles;
};

const std::vector<Theme>& themes() {
    static const std::vector<Theme> all = {
        {"tax",
         {"#taxbill", "#taxcuts", "#taxreform"},
         {},
         {"tax reform bill passes", "middle class tax cuts", "corporate tax rate drops", "senate vote tonight",
          "tax reform debate continues", "new tax brackets explained", "tax bill heads to conference"},
         {"senate", "donald trump", "paul ryan", "congress", "usa", "mitch mcconnell", "irs"},
         {"Senate passes tax reform bill", "What the tax bill means for you", "Tax cuts and the middle class",
          "Corporate tax rate falls in new bill", "Inside the tax reform vote"}},
        {"tech",
         {"#ai", "#cloud", "#earnings"},
         {"$MSFT", "$AAPL", "$GOOG"},
         {"cloud revenue growth", "new ai model released", "quarterly earnings beat estimates",
          "developer conference keynote", "open source tooling update"},
         {"microsoft", "california", "new york city"},
         {"Cloud revenue keeps climbing", "A new AI model arrives", "Earnings beat expectations",
          "Keynote highlights from the developer conference"}},
        {"sports",
         {"#worldseries", "#nba", "#gameday"},
         {},
         {"late game comeback win", "rookie scores career high", "playoff race heats up", "coach praises defense"},
         {"new york", "washington", "california"},
         {"Comeback win caps wild night", "Rookie sets career high", "Playoff race tightens"}},
        {"obama",
         {"#obama", "#leadership"},
         {},
         {"former president barack obama speech", "barack obama foundation event", "obama calls for civic action",
          "leadership summit in chicago"},
         {"barack obama", "usa"},
         {"Barack Obama speaks at leadership summit", "Obama foundation hosts civic event"}},
    };
    return all;
}

const std::array<const char*, 12> kOpeners = {"Big news:", "Wow", "Reading now", "Thread", "Must read",
                                              "Breaking", "Interesting", "Good analysis", "Worth a look",
                                              "Update", "Heads up", "Today"};
const std::array<const char*, 16> kFirst = {"alex", "sam", "jordan", "casey", "riley", "morgan", "taylor", "jamie",
                                            "drew", "kelly", "robin", "avery", "quinn", "reese", "parker", "sky"};
const std::array<const char*, 10> kLast = {"news", "politics", "tech", "sports", "daily", "watch", "report",
                                           "desk", "wire", "notes"};

class Generator {
public:
    explicit Generator(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {}

    Corpus run() {
        make_users();
        make_links();
        make_trust_conversations();
        make_stream();
        std::stable_sort(corpus_.posts.begin(), corpus_.posts.end(), [](const Post& a, const Post& b) {
            if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
            return a.post_id < b.post_id;
        });
        return std::move(corpus_);
    }

private:
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    template <typename C>
    const auto& choose(const C& c) {
        return c[pick(c.size())];
    }
    double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

    Instant random_time(std::size_t hour) {
        return Instant{spec_.start.seconds + static_cast<std::int64_t>(hour) * 3600 +
                       static_cast<std::int64_t>(pick(3600))};
    }

    Instant window_end() const {
        return Instant{spec_.start.seconds + static_cast<std::int64_t>(spec_.hours) * 3600};
    }

    std::string user_id(std::size_t i) const {
        char buf[24];
        std::snprintf(buf, sizeof buf, "u%04zu", i);
        return buf;
    }

    void make_users() {
        for (std::size_t i = 0; i < spec_.users; ++i) {
            UserProfile u;
            u.user_id = user_id(i);
            u.screen_name = std::string(kFirst[i % kFirst.size()]) + "_" + kLast[(i / kFirst.size()) % kLast.size()] +
                            std::to_string(i);
            u.display_name = std::string(kFirst[i % kFirst.size()]) + " " + kLast[(i / 3) % kLast.size()];
            u.verified = i < spec_.verified;
            u.is_protected = !u.verified && pick(40) == 0;
            u.authority_score = round3(u.verified ? 0.6 + 0.4 * uniform() : 0.1 + 0.8 * uniform());
            u.followers_count = static_cast<std::uint64_t>(std::exp(4.0 + 8.0 * uniform()));
            u.spam_score = round3(0.1 * uniform());
            u.adult_score = round3(pick(50) == 0 ? 0.9 : 0.1 * uniform());
            u.profile_image_url = "https://img.example.com/" + u.user_id + ".png";
            corpus_.users.push_back(u);
        }
        // A prolific account posting the same thing over and over.
        corpus_.users[spec_.users - 1].display_name = "deal bot";
    }

    void make_links() {
        for (std::size_t i = 0; i < spec_.links; ++i) {
            const Theme& theme = themes()[i % themes().size()];
            LinkMetadata l;
            l.url = "https://news.example.com/" + std::string(theme.name) + "/" + std::to_string(1000 + i);
            l.title = std::string(theme.titles[i / themes().size() % theme.titles.size()]);
            l.description = "Coverage from the " + std::string(theme.name) + " desk";
            l.spam_score = round3(i % 37 == 5 ? 0.95 : 0.2 * uniform());
            l.adult_score = round3(i % 41 == 7 ? 0.9 : 0.05 * uniform());
            link_theme_.push_back(i % themes().size());
            // Every eighth link stays without metadata.
            if (i % 8 != 3) corpus_.links.push_back(l);
            urls_.push_back(l.url);
        }
    }

    Post base_post(const std::string& author, Instant t) {
        Post p;
        p.post_id = "p" + std::to_string(100000 + next_id_++);
        p.author_id = author;
        p.timestamp = t;
        p.retweet_count = 0;
        p.favorite_count = 0;
        return p;
    }

    // Initiated two-way exchanges that grow trust rings outward from the verified accounts.
    void make_trust_conversations() {
        std::vector<std::size_t> frontier;
        for (std::size_t i = 0; i < spec_.verified; ++i) frontier.push_back(i);
        std::size_t next = spec_.verified;
        const std::size_t target = spec_.users * 4 / 5;
        std::size_t ring = 0;
        while (next < target && !frontier.empty() && ring < 6) {
            std::vector<std::size_t> grown;
            for (std::size_t v : frontier) {
                std::size_t fan = 1 + pick(4);
                for (std::size_t k = 0; k < fan && next < target; ++k) {
                    std::size_t u = next++;
                    std::size_t hour = pick(spec_.hours);
                    // Leaves room for the answer within the same hour.
                    Instant t1{spec_.start.seconds + static_cast<std::int64_t>(hour) * 3600 +
                               static_cast<std::int64_t>(pick(2900))};
                    Instant t2{t1.seconds + 30 + static_cast<std::int64_t>(pick(600))};
                    const Theme& theme = choose(themes());
                    Post ask = base_post(user_id(v), t1);
                    ask.text = "@" + corpus_.users[u].screen_name + " what do you think about " + choose(theme.phrases) + "?";
                    ask.mentioned_user_ids = {user_id(u)};
                    Post answer = base_post(user_id(u), t2);
                    answer.text = "@" + corpus_.users[v].screen_name + " " + choose(theme.phrases) + " " +
                                  choose(theme.hashtags);
                    answer.mentioned_user_ids = {user_id(v)};
                    answer.reply_to_user_id = user_id(v);
                    corpus_.posts.push_back(std::move(ask));
                    corpus_.posts.push_back(std::move(answer));
                    grown.push_back(u);
                }
            }
            frontier = std::move(grown);
            ++ring;
        }
    }

    std::string compose(const Theme& theme, std::size_t hour, std::vector<std::string>& links, bool& spark) {
        std::string text = choose(kOpeners);
        text += ' ';
        text += choose(theme.phrases);
        if (pick(2) == 0) {
            text += " with ";
            std::string entity = choose(theme.entities);
            // Capitalize for realism; extraction lowercases.
            bool start = true;
            for (char& c : entity) {
                if (start) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                start = c == ' ';
            }
            text += entity;
        }
        text += ' ';
        text += choose(theme.hashtags);
        if (pick(3) == 0) {
            text += ' ';
            text += choose(theme.hashtags);
        }
        if (!theme.cashtags.empty() && pick(2) == 0) {
            text += ' ';
            text += choose(theme.cashtags);
        }
        // A small one-hour burst: a few accounts, never reshared.
        if (hour == 0 && pick(200) == 0) {
            text += " #flashsale";
            spark = true;
        }
        if (pick(2) == 0) {
            std::size_t theme_index = static_cast<std::size_t>(&theme - themes().data());
            // Skew toward a few popular links per theme.
            std::size_t slot = std::min<std::size_t>(static_cast<std::size_t>(-std::log(uniform() + 1e-12) * 6.0),
                                                     spec_.links / themes().size() - 1);
            std::string url = urls_[slot * themes().size() + theme_index];
            links.push_back(url);
            text += ' ';
            text += url;
            if (pick(10) == 0) {
                std::string other = urls_[pick(spec_.links / themes().size()) * themes().size() + theme_index];
                if (other != url) {
                    links.push_back(other);
                    text += " " + other;
                }
            }
        }
        return text;
    }

    std::size_t active_author() {
        // Authors skew toward lower ids (verified and early trust rings).
        double x = uniform();
        return std::min<std::size_t>(static_cast<std::size_t>(x * x * static_cast<double>(spec_.users)),
                                     spec_.users - 2);
    }

    void make_stream() {
        const std::size_t already = corpus_.posts.size();
        const std::size_t remaining = spec_.posts > already ? spec_.posts - already : 0;
        std::vector<std::size_t> originals;  // indexes into corpus_.posts
        while (corpus_.posts.size() < spec_.posts) {
            std::size_t hour = (corpus_.posts.size() - already) * spec_.hours / remaining;
            Instant t = random_time(hour);
            double roll = uniform();
            if (roll < 0.25 && !originals.empty()) {
                make_retweet(originals, t);
                continue;
            }
            std::size_t a = active_author();
            const Theme& theme = choose(themes());
            Post p = base_post(user_id(a), t);
            bool spark = false;
            p.text = compose(theme, hour, p.link_urls, spark);
            if (roll < 0.45) {
                std::size_t m = active_author();
                if (m != a) {
                    p.text += " @" + corpus_.users[m].screen_name;
                    p.mentioned_user_ids.push_back(user_id(m));
                }
                std::size_t m2 = active_author();
                if (pick(3) == 0 && m2 != a && m2 != m) {
                    p.text += " @" + corpus_.users[m2].screen_name;
                    p.mentioned_user_ids.push_back(user_id(m2));
                }
            }
            p.favorite_count = static_cast<std::uint64_t>(std::exp(3.0 * uniform())) - 1;
            if (pick(25) == 0) p.spam_score = 0.9;
            if (pick(40) == 0) p.adult_score = 0.85;
            if (pick(40) == 0) p.profanity_score = 0.8;
            p.spam_score = std::max(p.spam_score, round3(0.1 * uniform()));
            if (!spark) originals.push_back(corpus_.posts.size());
            corpus_.posts.push_back(std::move(p));
        }
    }

    void make_retweet(const std::vector<std::size_t>& originals, Instant t) {
        // Prefer recent originals so cascades stay within an hour or two.
        std::size_t window = std::min<std::size_t>(originals.size(), 400);
        std::size_t idx = originals[originals.size() - 1 - pick(window)];
        const Post src = corpus_.posts[idx];
        if (!(src.timestamp < t)) return;
        std::size_t a = active_author();
        if (user_id(a) == src.author_id) return;
        Post rt = base_post(user_id(a), t);
        rt.text = "RT @" + corpus_.users[std::stoul(src.author_id.substr(1))].screen_name + ": " + src.text;
        rt.retweet_of_post_id = src.post_id;
        rt.retweet_of_user_id = src.author_id;
        rt.link_urls = src.link_urls;
        rt.spam_score = src.spam_score;
        corpus_.posts[idx].retweet_count += 1;
        std::size_t rt_index = corpus_.posts.size();
        corpus_.posts.push_back(std::move(rt));
        // Some retweets are retweeted again, forming deeper cascades.
        if (pick(3) == 0) {
            std::size_t b = active_author();
            const Post& parent = corpus_.posts[rt_index];
            Instant t2{t.seconds + 60 + static_cast<std::int64_t>(pick(900))};
            if (user_id(b) != parent.author_id && t2 < window_end()) {
                Post rt2 = base_post(user_id(b), t2);
                rt2.text = "RT @" + corpus_.users[std::stoul(parent.author_id.substr(1))].screen_name + ": " + src.text;
                rt2.retweet_of_post_id = parent.post_id;
                rt2.retweet_of_user_id = parent.author_id;
                rt2.link_urls = parent.link_urls;
                rt2.spam_score = parent.spam_score;
                corpus_.posts.push_back(std::move(rt2));
            }
        }
    }

    CorpusSpec spec_;
    std::mt19937_64 rng_;
    Corpus corpus_;
    std::vector<std::string> urls_;
    std::vector<std::size_t> link_theme_;
    std::size_t next_id_ = 0;
};

}  // namespace

Corpus generate_corpus(const CorpusSpec& spec) {
    if (spec.users < 2 || spec.verified > spec.users || spec.hours < 1 || spec.links < 8) {
        throw ValidationError("corpus", "corpus spec needs >= 2 users, verified <= users, >= 1 hour, >= 8 links");
    }
    return Generator(spec).run();
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto dump = [&](const char* name, const auto& records) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot create '" + (dir / name).string() + "'");
        for (const auto& r : records) out << to_json(r).dump() << '\n';
        if (!out) throw IoError("failed writing '" + (dir / name).string() + "'");
    };
    dump("posts.jsonl", corpus.posts);
    dump("users.jsonl", corpus.users);
    dump("links.jsonl", corpus.links);
}

}  // namespace skg

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "mmweb/config.hpp"
#include "mmweb/dedup.hpp"
#include "mmweb/filters.hpp"
#include "mmweb/minhash.hpp"
#include "mmweb/ngram_lm.hpp"
#include "mmweb/pipeline.hpp"
#include "mmweb/quality_model.hpp"
#include "mmweb/simplify.hpp"
#include "mmweb/text.hpp"
#include "mmweb/url.hpp"
#include "support.hpp"

using namespace mmweb;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kMaxPageRatio = 1.0 / 5.0;
constexpr double kMaxMeanPageRatio = 1.0 / 10.0;
constexpr std::size_t kMinPages = 10;
constexpr int kJaccardPairs = 200;
constexpr double kMaxMeanAbsError = 0.15;
constexpr int kBiasPairs = 1000;
constexpr double kMaxBias = 0.02;
constexpr int kDedupTrials = 20;
constexpr std::size_t kDedupDocs = 100;
constexpr std::size_t kQualityPerClass = 500;
constexpr double kMinQualityAccuracy = 0.90;
constexpr double kChanceTolerance = 0.10;
constexpr std::size_t kHeldOutSentences = 50;
constexpr double kMinPerplexityWins = 0.90;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double limit_s;
    std::function<Outcome()> check;
};

std::vector<std::string> lines_of(const fs::path& p) {
    std::vector<std::string> out;
    for (auto& l : text::paragraphs(read_file(p)))
        if (!l.empty() && l[0] != '#') out.push_back(std::move(l));
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

// --- cutoff table ----------------------------------------------------------

Outcome cutoff_table() {
    struct Row {
        std::string code;
        bool is_min;
        double paragraph, document;
        std::function<double&(TextMetrics&)> field;
        std::function<double&(TextCutoffs&)> cutoff;
    };
    const std::vector<Row> rows{
        {"MinWords", true, 4, 10, [](TextMetrics& m) -> double& { return m.word_count; }, [](TextCutoffs& c) -> double& { return c.min_words; }},
        {"MaxWords", false, 1000, 2000, [](TextMetrics& m) -> double& { return m.word_count; }, [](TextCutoffs& c) -> double& { return c.max_words; }},
        {"CharRepetition", false, 0.1, 0.1, [](TextMetrics& m) -> double& { return m.char_repetition_ratio; }, [](TextCutoffs& c) -> double& { return c.max_char_repetition_ratio; }},
        {"WordRepetition", false, 0.1, 0.2, [](TextMetrics& m) -> double& { return m.word_repetition_ratio; }, [](TextCutoffs& c) -> double& { return c.max_word_repetition_ratio; }},
        {"SpecialChars", false, 0.3, 0.275, [](TextMetrics& m) -> double& { return m.special_char_ratio; }, [](TextCutoffs& c) -> double& { return c.max_special_char_ratio; }},
        {"StopWords", true, 0.3, 0.35, [](TextMetrics& m) -> double& { return m.stop_word_ratio; }, [](TextCutoffs& c) -> double& { return c.min_stop_word_ratio; }},
        {"FlaggedWords", false, 0.01, 0.01, [](TextMetrics& m) -> double& { return m.flagged_word_ratio; }, [](TextCutoffs& c) -> double& { return c.max_flagged_word_ratio; }},
        {"Punctuation", true, 0.001, 0.03, [](TextMetrics& m) -> double& { return m.punctuation_ratio; }, [](TextCutoffs& c) -> double& { return c.min_punctuation_ratio; }},
        {"SpamWords", false, 0.12, 0.12, [](TextMetrics& m) -> double& { return m.spam_word_ratio; }, [](TextCutoffs& c) -> double& { return c.max_spam_word_ratio; }},
        {"CommonWords", true, 0.8, 0.9, [](TextMetrics& m) -> double& { return m.common_word_ratio; }, [](TextCutoffs& c) -> double& { return c.min_common_word_ratio; }},
        {"LangId", true, 0.8, 0.8, [](TextMetrics& m) -> double& { return *m.lang_id_score; }, [](TextCutoffs& c) -> double& { return c.min_lang_id_score; }},
        {"Perplexity", false, 1500, 1500, [](TextMetrics& m) -> double& { return *m.perplexity; }, [](TextCutoffs& c) -> double& { return c.max_perplexity; }},
    };
    // A metric record inside every bound of both profiles.
    auto clean = [] {
        TextMetrics m;
        m.word_count = 100;
        m.char_repetition_ratio = 0.0;
        m.word_repetition_ratio = 0.0;
        m.special_char_ratio = 0.05;
        m.stop_word_ratio = 0.5;
        m.flagged_word_ratio = 0.0;
        m.punctuation_ratio = 0.05;
        m.spam_word_ratio = 0.0;
        m.common_word_ratio = 0.95;
        m.lang_id_score = 0.99;
        m.perplexity = 200;
        return m;
    };
    int pairs = 0, ok = 0;
    std::string failures;
    for (int profile = 0; profile < 2; ++profile) {
        TextCutoffs table = profile == 0 ? TextCutoffs::paragraph_defaults() : TextCutoffs::document_defaults();
        if (!check_cutoffs(clean(), table).accepted()) return {false, "baseline record rejected"};
        for (const auto& row : rows) {
            ++pairs;
            const double expected = profile == 0 ? row.paragraph : row.document;
            const double value = row.cutoff(table);
            TextMetrics at = clean();
            row.field(at) = value;
            TextMetrics beyond = clean();
            row.field(beyond) = std::nextafter(value, row.is_min ? -INFINITY : INFINITY);
            const auto pass_v = check_cutoffs(at, table);
            const auto fail_v = check_cutoffs(beyond, table);
            const bool good = value == expected && pass_v.accepted() && fail_v.reasons.size() == 1 &&
                              fail_v.reasons[0].code == row.code && fail_v.reasons[0].cutoff == expected;
            if (good) {
                ++ok;
            } else {
                failures += " " + std::string(profile ? "document/" : "paragraph/") + row.code;
            }
        }
    }
    return {ok == pairs && pairs == 24, std::to_string(ok) + "/" + std::to_string(pairs) + " boundary pairs" + failures};
}

// --- DOM simplification ------------------------------------------------------

Outcome simplification() {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(testing::data_dir() / "pages"))
        if (e.path().extension() == ".html") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    double sum = 0, worst = 0;
    for (const auto& f : files) {
        const std::string raw = read_file(f);
        const double ratio = static_cast<double>(serialize_html(simplify(raw)).size()) / static_cast<double>(raw.size());
        sum += ratio;
        worst = std::max(worst, ratio);
    }
    const double mean = files.empty() ? 1.0 : sum / static_cast<double>(files.size());

    const std::string page =
        "<html><head><style>p{}</style><script>x()</script></head><body>"
        "<div id=\"site-header\"><img src=\"/logo.png\"></div><nav><a href=\"/\">Home</a></nav>"
        "<div class=\"content\"><h1>The <em>River</em></h1><!-- ad --><p>First <b>paragraph</b>.<br>Second.</p>"
        "<figure><img src=\"/r.jpg\" alt=\"R\" style=\"x\"><figcaption>A river.</figcaption></figure>"
        "<table><tr><td>1</td></tr></table><div date=\"2021\">Posted</div>"
        "<p><a class=\"more-link\" href=\"/m\">More</a></p></div><footer>F</footer></body></html>";
    const std::string golden =
        "<div class=\"content\"><h1>The River</h1><p>First paragraph.<br>Second.</p>"
        "<figure><img src=\"/r.jpg\" alt=\"R\"><figcaption>A river.</figcaption></figure>"
        "<p>END_OF_DOCUMENT_TOKEN_TO_BE_REPLACED</p></div>";
    const bool golden_ok = serialize_html(simplify(page)) == golden;

    const bool pass = files.size() >= kMinPages && worst <= kMaxPageRatio && mean <= kMaxMeanPageRatio && golden_ok;
    return {pass, std::to_string(files.size()) + " pages, max ratio " + fmt(worst) + ", mean " + fmt(mean) +
                      ", golden tree " + (golden_ok ? "ok" : "differs")};
}

// --- MinHash -----------------------------------------------------------------

double shingle_jaccard(const std::string& a, const std::string& b) {
    auto sa = word_shingles(a, 5), sb = word_shingles(b, 5);
    std::set<std::string> A(sa.begin(), sa.end()), B(sb.begin(), sb.end());
    std::size_t inter = 0;
    for (const auto& s : A) inter += B.count(s);
    return static_cast<double>(inter) / static_cast<double>(A.size() + B.size() - inter);
}

std::string join(const std::vector<std::string>& toks) {
    std::string s;
    for (const auto& t : toks) s += (s.empty() ? "" : " ") + t;
    return s;
}

Outcome minhash_fidelity() {
    std::mt19937_64 rng(101);
    double err = 0;
    for (int i = 0; i < kJaccardPairs; ++i) {
        auto toks = text::tokens(testing::random_words(rng, 50 + rng() % 50, 400));
        auto other = toks;
        const int edits = static_cast<int>(rng() % 40);
        for (int e = 0; e < edits; ++e) other[rng() % other.size()] = "e" + std::to_string(rng());
        const auto a = join(toks), b = join(other);
        err += std::abs(estimate_similarity(minhash_signature(a), minhash_signature(b)) - shingle_jaccard(a, b));
    }
    const double mean_err = err / kJaccardPairs;
    bool pass = mean_err <= kMaxMeanAbsError;
    std::string detail = "mean |err| " + fmt(mean_err);

    // Shared prefix of s tokens and private suffixes of x tokens, all tokens
    // distinct: J = (s - 4) / (s - 4 + 2x) over word 5-grams.
    const std::vector<std::tuple<double, int, int>> targets{{0.2, 24, 40}, {0.5, 64, 30}, {0.8, 84, 10}};
    std::uint64_t serial = 0;
    for (const auto& [J, s, x] : targets) {
        double sum = 0;
        for (int i = 0; i < kBiasPairs; ++i) {
            std::vector<std::string> shared, a_tail, b_tail;
            for (int k = 0; k < s; ++k) shared.push_back("t" + std::to_string(serial++));
            for (int k = 0; k < x; ++k) a_tail.push_back("t" + std::to_string(serial++));
            for (int k = 0; k < x; ++k) b_tail.push_back("t" + std::to_string(serial++));
            auto a = shared, b = shared;
            a.insert(a.end(), a_tail.begin(), a_tail.end());
            b.insert(b.end(), b_tail.begin(), b_tail.end());
            const auto ta = join(a), tb = join(b);
            if (i == 0 && std::abs(shingle_jaccard(ta, tb) - J) > 1e-12) return {false, "pair construction broken"};
            sum += estimate_similarity(minhash_signature(ta), minhash_signature(tb));
        }
        const double bias = sum / kBiasPairs - J;
        pass = pass && std::abs(bias) <= kMaxBias;
        detail += ", bias@" + fmt(J) + " " + fmt(bias);
    }
    return {pass, detail};
}

// --- dedup oracles ------------------------------------------------------------

/// Rebuilds a segment list without the dropped images, joining texts that become adjacent.
std::vector<Segment> drop_images(const std::vector<Segment>& segs, const std::function<bool(std::size_t, const ImageSegment&)>& drop) {
    std::vector<Segment> out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (const auto* img = std::get_if<ImageSegment>(&segs[i])) {
            if (!drop(i, *img)) out.push_back(*img);
            continue;
        }
        const auto& t = std::get<TextSegment>(segs[i]);
        if (!out.empty() && std::holds_alternative<TextSegment>(out.back())) {
            std::get<TextSegment>(out.back()).body += "\n" + t.body;
        } else {
            out.push_back(t);
        }
    }
    return out;
}

std::vector<MultimodalDocument> oracle_images(std::vector<MultimodalDocument> docs) {
    for (auto& d : docs) {
        std::vector<std::string> seen;
        d.segments = drop_images(d.segments, [&](std::size_t, const ImageSegment& img) {
            if (std::find(seen.begin(), seen.end(), img.src_url) != seen.end()) return true;
            seen.push_back(img.src_url);
            return false;
        });
    }
    std::map<std::string, int> holders;
    for (const auto& d : docs)
        for (const auto& s : d.segments)
            if (const auto* img = std::get_if<ImageSegment>(&s)) ++holders[img->src_url];
    for (auto& d : docs)
        d.segments = drop_images(d.segments, [&](std::size_t, const ImageSegment& img) { return holders[img.src_url] > 10; });
    return docs;
}

bool newer(const MultimodalDocument& a, const MultimodalDocument& b) {
    return a.fetch_time != b.fetch_time ? a.fetch_time > b.fetch_time : a.id > b.id;
}

std::vector<MultimodalDocument> oracle_url(const std::vector<MultimodalDocument>& docs) {
    std::vector<MultimodalDocument> out;
    for (const auto& d : docs) {
        bool beaten = false;
        for (const auto& o : docs)
            if (&o != &d && o.url == d.url && newer(o, d)) beaten = true;
        if (!beaten) out.push_back(d);
    }
    return out;
}

std::set<std::string> image_set(const MultimodalDocument& d) {
    std::set<std::string> s;
    for (const auto& seg : d.segments)
        if (const auto* img = std::get_if<ImageSegment>(&seg)) s.insert(img->src_url);
    return s;
}

std::vector<MultimodalDocument> oracle_image_set(const std::vector<MultimodalDocument>& docs) {
    std::vector<MultimodalDocument> out;
    for (const auto& d : docs) {
        const auto mine = image_set(d);
        bool beaten = false;
        if (!mine.empty())
            for (const auto& o : docs)
                if (&o != &d && image_set(o) == mine && newer(o, d)) beaten = true;
        if (!beaten) out.push_back(d);
    }
    return out;
}

std::string host_domain(const std::string& url) {
    std::string rest = url.substr(url.find("://") + 3);
    rest = rest.substr(0, rest.find('/'));
    if (rest.starts_with("www.")) rest = rest.substr(4);
    return rest;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<MultimodalDocument> oracle_paragraphs(std::vector<MultimodalDocument> docs) {
    std::map<std::pair<std::string, std::string>, int> counts;
    for (const auto& d : docs)
        for (const auto& s : d.segments)
            if (const auto* t = std::get_if<TextSegment>(&s))
                for (const auto& p : split_lines(t->body)) ++counts[{host_domain(d.url), p}];
    std::vector<MultimodalDocument> out;
    for (auto& d : docs) {
        std::vector<Segment> segs;
        bool has_text = false;
        for (const auto& s : d.segments) {
            if (const auto* t = std::get_if<TextSegment>(&s)) {
                std::string kept;
                for (const auto& p : split_lines(t->body))
                    if (counts[{host_domain(d.url), p}] < 3) kept += (kept.empty() ? "" : "\n") + p;
                if (kept.empty()) continue;
                has_text = true;
                segs.push_back(TextSegment{kept});
            } else {
                segs.push_back(s);
            }
        }
        d.segments = std::move(segs);
        if (has_text) out.push_back(std::move(d));
    }
    return out;
}

std::vector<MultimodalDocument> synthetic_corpus(std::mt19937_64& rng) {
    static const std::vector<std::string> paragraphs{
        "Share this article", "Posted in Travel", "Comments are closed.", "Subscribe to the newsletter",
        "The bridge was rebuilt in stone.", "A short walk leads to the mill.", "Photo by the author"};
    static const std::vector<std::string> hosts{"http://www.a.org", "http://a.org", "https://b.org", "http://c.net"};
    std::vector<MultimodalDocument> docs;
    for (std::size_t i = 0; i < kDedupDocs; ++i) {
        std::vector<Segment> segs;
        const int parts = 1 + static_cast<int>(rng() % 6);
        bool last_text = false;
        for (int k = 0; k < parts; ++k) {
            if (!last_text && rng() % 2) {
                std::string body;
                const int np = 1 + static_cast<int>(rng() % 3);
                for (int j = 0; j < np; ++j) {
                    const auto& p = rng() % 3 ? paragraphs[rng() % paragraphs.size()]
                                              : "Unique text " + std::to_string(i) + "." + std::to_string(k) + "." + std::to_string(j);
                    body += (j ? "\n" : "") + p;
                }
                segs.push_back(testing::text(body));
                last_text = true;
            } else {
                segs.push_back(testing::image("http://img.org/" + std::to_string(rng() % 25) + ".jpg"));
                last_text = false;
            }
        }
        if (!last_text && rng() % 2) segs.push_back(testing::text("Closing words " + std::to_string(i)));
        if (std::none_of(segs.begin(), segs.end(), [](const Segment& s) { return std::holds_alternative<TextSegment>(s); }))
            segs.insert(segs.begin(), testing::text("Opening words " + std::to_string(i)));
        docs.push_back(testing::doc("d" + std::to_string(rng() % 1000), hosts[rng() % hosts.size()] + "/p" + std::to_string(rng() % 30), static_cast<std::int64_t>(rng() % 6), segs));
    }
    return docs;
}

/// Shard-local counting, merge in shuffled order, then a per-document apply:
/// the same two-phase path the pipeline runs.
CorpusCounters sharded_counts(const std::vector<MultimodalDocument>& docs, std::mt19937_64& rng,
                              void (*count)(std::span<const MultimodalDocument>, CorpusCounters&)) {
    std::vector<CorpusCounters> shards;
    for (std::size_t start = 0; start < docs.size();) {
        const std::size_t len = std::min<std::size_t>(1 + rng() % 20, docs.size() - start);
        CorpusCounters c;
        count(std::span(docs).subspan(start, len), c);
        shards.push_back(std::move(c));
        start += len;
    }
    std::shuffle(shards.begin(), shards.end(), rng);
    CorpusCounters merged;
    for (const auto& s : shards) merged.merge(s);
    return merged;
}

Outcome dedup_oracles() {
    std::mt19937_64 rng(103);
    int mismatches[4] = {0, 0, 0, 0};
    for (int trial = 0; trial < kDedupTrials; ++trial) {
        const auto docs = synthetic_corpus(rng);

        auto images = docs;
        const auto ic = sharded_counts(docs, rng, count_image_urls);
        drop_overused_images(images, ic, 10);
        mismatches[0] += images != oracle_images(docs);
        mismatches[0] += dedup_images(docs) != oracle_images(docs);

        const auto uc = sharded_counts(docs, rng, count_latest_by_url);
        std::vector<MultimodalDocument> by_url;
        for (const auto& d : docs)
            if (survives_url_dedup(d, uc)) by_url.push_back(d);
        mismatches[1] += by_url != oracle_url(docs);
        mismatches[1] += dedup_documents_by_url(docs) != oracle_url(docs);

        const auto sc = sharded_counts(docs, rng, count_latest_by_image_set);
        std::vector<MultimodalDocument> by_set;
        for (const auto& d : docs)
            if (survives_image_set_dedup(d, sc)) by_set.push_back(d);
        mismatches[2] += by_set != oracle_image_set(docs);
        mismatches[2] += dedup_documents_by_image_set(docs) != oracle_image_set(docs);

        const auto pc = sharded_counts(docs, rng, count_paragraphs);
        std::vector<MultimodalDocument> by_para;
        for (auto d : docs) {
            remove_repeated_paragraphs(d, pc, 3);
            if (!text::trim(d.text()).empty()) by_para.push_back(std::move(d));
        }
        mismatches[3] += by_para != oracle_paragraphs(docs);
        mismatches[3] += dedup_paragraphs_by_domain(docs) != oracle_paragraphs(docs);
    }
    const int total = mismatches[0] + mismatches[1] + mismatches[2] + mismatches[3];
    return {total == 0, std::to_string(kDedupTrials) + " trials x " + std::to_string(kDedupDocs) +
                            " docs; mismatches image-url " + std::to_string(mismatches[0]) + ", url " +
                            std::to_string(mismatches[1]) + ", image-set " + std::to_string(mismatches[2]) +
                            ", paragraph " + std::to_string(mismatches[3])};
}

// --- quality classifier --------------------------------------------------------

double accuracy(const QualityModel& m, const std::vector<std::string>& pos, const std::vector<std::string>& neg) {
    std::size_t right = 0;
    for (const auto& p : pos) right += m.score(p) > 0.5;
    for (const auto& n : neg) right += m.score(n) <= 0.5;
    return static_cast<double>(right) / static_cast<double>(pos.size() + neg.size());
}

Outcome quality_classifier() {
    const auto pos = lines_of(testing::data_dir() / "quality" / "positive.txt");
    const auto neg = lines_of(testing::data_dir() / "quality" / "negative.txt");
    if (pos.size() < 2 * kQualityPerClass || neg.size() < 2 * kQualityPerClass) return {false, "corpora too small"};
    auto slice = [](const std::vector<std::string>& v, std::size_t from) {
        return std::vector<std::string>(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + kQualityPerClass));
    };
    const auto model = QualityModel::train(slice(pos, 0), slice(neg, 0));
    const double held_out = accuracy(model, slice(pos, kQualityPerClass), slice(neg, kQualityPerClass));

    // Identical classes: both labels drawn from one shuffled pool.
    std::vector<std::string> pool = pos;
    pool.insert(pool.end(), neg.begin(), neg.end());
    std::mt19937_64 rng(107);
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto same = QualityModel::train(slice(pool, 0), slice(pool, kQualityPerClass));
    const double chance = accuracy(same, slice(pool, 2 * kQualityPerClass), slice(pool, 3 * kQualityPerClass));

    const bool pass = held_out >= kMinQualityAccuracy && std::abs(chance - 0.5) <= kChanceTolerance;
    return {pass, "held-out accuracy " + fmt(held_out) + ", identical classes " + fmt(chance)};
}

// --- perplexity ordering -------------------------------------------------------

Outcome perplexity_ordering() {
    const auto corpus = lines_of(testing::data_dir() / "corpus" / "wiki_sample.txt");
    if (corpus.size() < 2000) return {false, "corpus too small"};
    const std::size_t train_n = corpus.size() - 1000;
    const auto lm = NGramLM::train(std::span(corpus).first(train_n));
    std::size_t wins = 0, n = 0;
    for (std::size_t i = train_n; n < kHeldOutSentences; i += 17, ++n) {
        auto toks = text::tokens(corpus[i]);
        std::reverse(toks.begin(), toks.end());
        wins += lm.perplexity(corpus[i]) < lm.perplexity(join(toks));
    }
    const double share = static_cast<double>(wins) / static_cast<double>(n);
    return {share >= kMinPerplexityWins, std::to_string(wins) + "/" + std::to_string(n) + " held-out sentences beat their reversal"};
}

// --- end to end ----------------------------------------------------------------

PipelineConfig fixture_config(const fs::path& out) {
    auto c = load_config(testing::data_dir() / "fixtures" / "run_all.json");
    c.output = out.string();
    return c;
}

Outcome determinism() {
    testing::TempDir dir("mmweb-acceptance");
    const auto first = read_file(run_pipeline(fixture_config(dir / "run1")).output);
    const auto second = read_file(run_pipeline(fixture_config(dir / "run2")).output);
    const auto golden = read_file(testing::data_dir() / "fixtures" / "golden_documents.jsonl");

    auto crashing = fixture_config(dir / "crash");
    crashing.crash_after_stage = "url_dedup";
    bool crashed = false;
    try {
        run_pipeline(crashing);
    } catch (const PipelineError& e) {
        crashed = e.stage() == "url_dedup";
    }
    const auto resumed = read_file(run_pipeline(crashing).output);

    const bool pass = first == second && first == golden && crashed && resumed == first;
    return {pass, std::string("repeat ") + (first == second ? "identical" : "differs") + ", golden " +
                      (first == golden ? "matches" : "differs") + ", crash+resume " +
                      (crashed && resumed == first ? "identical" : "differs")};
}

Outcome funnel_sanity() {
    testing::TempDir dir("mmweb-acceptance");
    const auto result = run_pipeline(fixture_config(dir / "out"));
    bool monotone = true;
    for (const auto& r : result.reports) monotone = monotone && r.records_out <= r.records_in;

    std::vector<MultimodalDocument> filtered;
    for (const auto& entry : fs::directory_iterator(dir / "out" / "stages")) {
        if (!entry.path().filename().string().ends_with("_doc_filter")) continue;
        for (const auto& f : fs::directory_iterator(entry.path()))
            if (f.path().extension() == ".jsonl")
                for (auto& d : read_documents(f.path())) filtered.push_back(std::move(d));
    }
    std::size_t bad = 0;
    for (const auto& d : filtered) {
        const auto images = d.image_count();
        bad += images < 1 || images > 30 || text::tokens(d.text()).size() < 10;
    }
    const bool pass = monotone && !filtered.empty() && bad == 0;
    return {pass, std::to_string(result.reports.size()) + " stage reports " + (monotone ? "monotone" : "NOT monotone") +
                      ", document filter output " + std::to_string(filtered.size()) + " docs, " + std::to_string(bad) +
                      " outside 1-30 images / 10 words"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"cutoff-table", 5, cutoff_table},
        {"dom-simplification", 10, simplification},
        {"minhash-fidelity", 30, minhash_fidelity},
        {"dedup-oracles", 30, dedup_oracles},
        {"quality-classifier", 60, quality_classifier},
        {"perplexity-ordering", 30, perplexity_ordering},
        {"end-to-end-determinism", 120, determinism},
        {"funnel-sanity", 120, funnel_sanity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << fmt(secs) << " s of "
                  << c.limit_s << " s" << (in_time ? "" : ", too slow") << "]" << std::endl;
    }
    return failed ? 1 : 0;
}

#include <doctest.h>

#include <array>
#include <map>

#include "mmweb/filters.hpp"
#include "mmweb/simplify.hpp"
#include "mmweb/text.hpp"
#include "support.hpp"

using namespace mmweb;

namespace {

/// Brute-force duplicate-window count: each window is compared to all earlier ones.
double brute_repetition(const std::vector<std::string>& items, std::size_t n) {
    if (items.size() < n) return 0.0;
    const std::size_t windows = items.size() - n + 1;
    std::size_t dup = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::equal(items.begin() + i, items.begin() + i + n, items.begin() + j)) {
                ++dup;
                break;
            }
        }
    }
    return static_cast<double>(dup) / windows;
}

WordLists small_lists() {
    WordLists l;
    l.stop = {"the", "on", "a", "of", "and", "in", "to", "is", "was", "it"};
    l.flagged = {"porn", "xxx"};
    l.spam = {"share", "facebook", "cookies", "subscribe"};
    for (const char* w : {"the", "on", "a", "of", "and", "in", "to", "is", "was", "it", "river", "town", "old",
                          "bridge", "built", "stone", "valley", "people", "church", "market", "castle", "north"})
        l.common.insert(w);
    return l;
}

std::vector<double*> cutoff_fields(TextCutoffs& c) {
    return {&c.min_words,         &c.max_words,          &c.max_char_repetition_ratio, &c.max_word_repetition_ratio,
            &c.max_special_char_ratio, &c.min_stop_word_ratio, &c.max_flagged_word_ratio, &c.min_punctuation_ratio,
            &c.max_spam_word_ratio, &c.min_common_word_ratio, &c.min_lang_id_score,   &c.max_perplexity};
}

/// Index i of cutoff_fields is a minimum cutoff.
bool is_min_field(std::size_t i) { return i == 0 || i == 5 || i == 7 || i == 9 || i == 10; }

std::string random_paragraph(std::mt19937_64& rng) {
    static const std::vector<std::string> vocab{"the", "river", "old",  "town", "bridge", "a",    "of",    "built",
                                                "stone", "share", "xxx", "on",   "church", "north", "valley", "it",
                                                "zork", "!!",  "--",  "and",  "people", "(c)",   "market", "is"};
    const std::size_t n = 1 + rng() % 40;
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        s += (i ? " " : "") + vocab[rng() % vocab.size()];
        if (rng() % 7 == 0) s += ",";
        if (rng() % 11 == 0) s += ".";
    }
    return s;
}

}  // namespace

TEST_SUITE("filters") {

TEST_CASE("cutoff defaults equal the published table") {
    const TextCutoffs p = TextCutoffs::paragraph_defaults();
    CHECK(p.min_words == 4);
    CHECK(p.max_words == 1000);
    CHECK(p.max_char_repetition_ratio == 0.1);
    CHECK(p.max_word_repetition_ratio == 0.1);
    CHECK(p.max_special_char_ratio == 0.3);
    CHECK(p.min_stop_word_ratio == 0.3);
    CHECK(p.max_flagged_word_ratio == 0.01);
    CHECK(p.min_punctuation_ratio == 0.001);
    CHECK(p.max_spam_word_ratio == 0.12);
    CHECK(p.min_common_word_ratio == 0.8);
    CHECK(p.min_lang_id_score == 0.8);
    CHECK(p.max_perplexity == 1500);

    const TextCutoffs d = TextCutoffs::document_defaults();
    CHECK(d.min_words == 10);
    CHECK(d.max_words == 2000);
    CHECK(d.max_char_repetition_ratio == 0.1);
    CHECK(d.max_word_repetition_ratio == 0.2);
    CHECK(d.max_special_char_ratio == 0.275);
    CHECK(d.min_stop_word_ratio == 0.35);
    CHECK(d.max_flagged_word_ratio == 0.01);
    CHECK(d.min_punctuation_ratio == 0.03);
    CHECK(d.max_spam_word_ratio == 0.12);
    CHECK(d.min_common_word_ratio == 0.9);
    CHECK(d.min_lang_id_score == 0.8);
    CHECK(d.max_perplexity == 1500);
}

TEST_CASE("image filter defaults and validation") {
    ImageFilterParams p;
    CHECK(p.min_side == 150);
    CHECK(p.max_side == 20000);
    CHECK(p.min_aspect == 0.5);
    CHECK(p.max_aspect == 2.0);
    CHECK(p.banned_substrings == std::vector<std::string>{"logo", "button", "icon", "plugin", "widget"});
    CHECK(p.min_images_per_doc == 1);
    CHECK(p.max_images_per_doc == 30);
    CHECK_NOTHROW(p.validate());
    p.min_aspect = 0.4;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.min_side = 30000;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("stop word ratio by hand count") {
    WordLists l;
    l.stop = {"the", "on"};
    auto m = text_metrics("the cat sat on the mat", l, {});
    CHECK(m.stop_word_ratio == doctest::Approx(3.0 / 6.0));
    CHECK(m.word_count == 6);
    CHECK(m.word_repetition_ratio == 0.0);
}

TEST_CASE("character repetition of twenty a's") {
    auto m = text_metrics(std::string(20, 'a'), {}, {});
    CHECK(m.char_repetition_ratio == doctest::Approx(10.0 / 11.0));
    std::vector<std::string> chars(20, "a");
    CHECK(brute_repetition(chars, 10) == doctest::Approx(10.0 / 11.0));
}

TEST_CASE("texts shorter than the window have zero repetition") {
    auto m = text_metrics("aaaa bbb", {}, {});
    CHECK(m.char_repetition_ratio == 0.0);
    CHECK(m.word_repetition_ratio == 0.0);
}

TEST_CASE("empty text is an error") {
    CHECK_THROWS_AS(text_metrics("", {}, {}), Error);
    CHECK_THROWS_AS(text_metrics(" \n ", {}, {}), Error);
}

TEST_CASE("character class ratios") {
    // 11 chars: 8 letters, 1 space, ',' and '!'
    auto m = text_metrics("abcd, efgh!", {}, {});
    CHECK(m.special_char_ratio == doctest::Approx(2.0 / 11.0));
    CHECK(m.punctuation_ratio == doctest::Approx(2.0 / 11.0));
    // '+' is special but not punctuation
    auto n = text_metrics("a+b", {}, {});
    CHECK(n.special_char_ratio == doctest::Approx(1.0 / 3.0));
    CHECK(n.punctuation_ratio == 0.0);
}

TEST_CASE("property: repetition ratios match a brute-force oracle") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = testing::random_words(rng, 1 + rng() % 60, 1 + rng() % 8);
        const auto toks = text::tokens(s);
        auto m = text_metrics(s, {}, {});
        CHECK(m.word_repetition_ratio == doctest::Approx(brute_repetition(toks, 5)));
        std::vector<std::string> chars;
        for (char c : s) chars.emplace_back(1, c);
        CHECK(m.char_repetition_ratio == doctest::Approx(brute_repetition(chars, 10)));
    }
}

TEST_CASE("common words") {
    std::vector<std::string> corpus{"a b a", "b c"};
    CHECK(build_common_words(corpus) == WordSet{"a", "b"});
    CHECK(build_common_words(std::vector<std::string>{}).empty());
    CHECK(build_common_words(std::vector<std::string>{"x x"}) == WordSet{"x"});
    CHECK(build_common_words(std::vector<std::string>{"Word, word. other"}) == WordSet{"word"});
}

TEST_CASE("word list parsing") {
    auto w = parse_word_list("# comment\n  The \n\nCaf\xc3\xa9\nCafe\xcc\x81\n");
    CHECK(w == WordSet{"the", "caf\xc3\xa9"});
    const auto dir = testing::data_dir() / "wordlists";
    CHECK(load_word_list(dir / "stop.txt").count("the"));
    CHECK(load_word_list(dir / "spam.txt").count("share"));
    CHECK_FALSE(load_word_list(dir / "flagged.txt").empty());
    CHECK_THROWS_AS(load_word_list(dir / "absent.txt"), Error);
}

TEST_CASE("image filter examples") {
    ImageFilterParams p;
    CHECK(filter_image(testing::image("http://x.org/photo.jpg", 800, 600), p).accepted());
    auto small = filter_image(testing::image("http://x.org/a.png", 100, 100, ImageFormat::png), p);
    REQUIRE(small.reasons.size() == 1);
    CHECK(small.reasons[0].code == "TooSmall");
    auto wide = filter_image(testing::image("http://x.org/a.jpg", 1000, 400), p);
    REQUIRE(wide.reasons.size() == 1);
    CHECK(wide.reasons[0].code == "Aspect");
    CHECK(wide.reasons[0].observed == doctest::Approx(2.5));
    auto logo = filter_image(testing::image("http://x.org/LOGO-small.png", 300, 300, ImageFormat::webp), p);
    REQUIRE(logo.reasons.size() == 1);
    CHECK(logo.reasons[0].code == "BannedSubstring");
    CHECK(filter_image(testing::image("http://x.org/a.gif", 400, 300, ImageFormat::other), p).reasons[0].code == "Format");
    CHECK(filter_image(testing::image("http://x.org/a.jpg", 20001, 20000), p).reasons[0].code == "TooLarge");
    // Boundaries are inclusive.
    CHECK(filter_image(testing::image("http://x.org/a.jpg", 150, 300), p).accepted());
    CHECK(filter_image(testing::image("http://x.org/a.jpg", 300, 150), p).accepted());
    CHECK(filter_image(testing::image("http://x.org/a.jpg", 149, 200), p).reasons[0].code == "TooSmall");
    CHECK_THROWS_AS(filter_image(ImageSegment{"http://x.org/a.jpg", {}, {}, {}, {}}, p), Error);
}

TEST_CASE("paragraph filter examples") {
    TextFilterParams p;
    const auto l = small_lists();
    auto few = filter_paragraph("too few words", p, l, {});
    REQUIRE_FALSE(few.accepted());
    CHECK(few.reasons[0].code == "MinWords");
    CHECK(few.reasons[0].observed == 3);

    // Word-count boundary in isolation: only the word limits are active.
    TextFilterParams words_only;
    for (double* f : cutoff_fields(words_only.paragraph)) *f = 0;
    words_only.paragraph.min_words = 4;
    words_only.paragraph.max_words = 1000;
    for (std::size_t i = 0; i < 12; ++i)
        if (!is_min_field(i)) *cutoff_fields(words_only.paragraph)[i] = std::numeric_limits<double>::infinity();
    words_only.paragraph.max_words = 1000;
    std::string thousand;
    for (int i = 0; i < 1000; ++i) thousand += "w" + std::to_string(i) + " ";
    CHECK(filter_paragraph(thousand, words_only, l, {}).accepted());
    auto over = filter_paragraph(thousand + "extra", words_only, l, {});
    REQUIRE(over.reasons.size() == 1);
    CHECK(over.reasons[0].code == "MaxWords");

    // 2 flagged of 100 tokens.
    std::string flagged;
    for (int i = 0; i < 98; ++i) flagged += "w" + std::to_string(i) + " ";
    flagged += "xxx porn";
    auto fv = filter_paragraph(flagged, p, l, {});
    bool has_flagged = false;
    for (const auto& r : fv.reasons) {
        if (r.code == "FlaggedWords") {
            has_flagged = true;
            CHECK(r.observed == doctest::Approx(0.02));
        }
    }
    CHECK(has_flagged);

    CHECK(filter_paragraph("The old river was built on the stone, and the town is north.", p, l, {}).accepted());
}

TEST_CASE("document filter examples") {
    TextFilterParams tp;
    ImageFilterParams ip;
    const auto l = small_lists();
    const std::string body = "The old river was built on the stone, and the town is north of the old bridge, by the church.";
    auto make = [&](int images, const std::string& t) {
        std::vector<Segment> segs{testing::text(t)};
        for (int i = 0; i < images; ++i) segs.push_back(testing::image("http://x.org/" + std::to_string(i) + ".jpg"));
        return testing::doc("d", "http://x.org/", 1, segs);
    };
    auto codes = [](const FilterVerdict& v) {
        std::vector<std::string> out;
        for (const auto& r : v.reasons) out.push_back(r.code);
        return out;
    };
    CHECK(filter_document(make(1, body), tp, ip, l, {}).verdict.accepted());
    CHECK(filter_document(make(30, body), tp, ip, l, {}).verdict.accepted());
    CHECK(codes(filter_document(make(31, body), tp, ip, l, {}).verdict) == std::vector<std::string>{"TooManyImages"});
    CHECK(codes(filter_document(make(0, body), tp, ip, l, {}).verdict) == std::vector<std::string>{"NoImages"});
    auto nine = filter_document(make(1, "The old river was built on the town bridge."), tp, ip, l, {});
    REQUIRE_FALSE(nine.verdict.accepted());
    CHECK(nine.verdict.reasons[0].code == "MinWords");
    CHECK(nine.verdict.reasons[0].observed == 9);
}

TEST_CASE("node filtering drops paragraphs and merges text around removed images") {
    TextFilterParams tp;
    ImageFilterParams ip;
    const auto l = small_lists();
    const std::string good = "The old river was built on the stone, and the town is north.";
    auto d = testing::doc("d", "http://x.org/", 1,
                          {testing::text(good + "\nshare facebook"), testing::image("http://x.org/logo.png"),
                           testing::text(good + "\n" + std::string(kEndOfDocumentToken)),
                           testing::image("http://x.org/photo.jpg")});
    auto r = filter_nodes(d, tp, ip, l, {});
    CHECK(r.paragraphs_removed == 1);
    CHECK(r.images_removed == 1);
    REQUIRE(r.document.segments.size() == 2);
    CHECK(std::get<TextSegment>(r.document.segments[0]).body ==
          good + "\n" + good + "\n" + std::string(kEndOfDocumentToken));
    CHECK(r.reasons.at("BannedSubstring") == 1);
}

TEST_CASE("property: ratios in range and reasons match recomputed metrics") {
    std::mt19937_64 rng(17);
    const auto l = small_lists();
    TextFilterParams p;
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = random_paragraph(rng);
        auto m = text_metrics(s, l, {});
        for (double r : {m.char_repetition_ratio, m.word_repetition_ratio, m.special_char_ratio, m.stop_word_ratio,
                         m.flagged_word_ratio, m.punctuation_ratio, m.spam_word_ratio, m.common_word_ratio}) {
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
        }
        auto v = filter_paragraph(s, p, l, {});
        auto again = text_metrics(s, l, {});
        std::map<std::string, double> observed{{"MinWords", again.word_count},
                                               {"MaxWords", again.word_count},
                                               {"CharRepetition", again.char_repetition_ratio},
                                               {"WordRepetition", again.word_repetition_ratio},
                                               {"SpecialChars", again.special_char_ratio},
                                               {"StopWords", again.stop_word_ratio},
                                               {"FlaggedWords", again.flagged_word_ratio},
                                               {"Punctuation", again.punctuation_ratio},
                                               {"SpamWords", again.spam_word_ratio},
                                               {"CommonWords", again.common_word_ratio}};
        for (const auto& r : v.reasons) CHECK(r.observed == observed.at(r.code));
    }
}

TEST_CASE("property: relaxing one cutoff never rejects an accepted paragraph") {
    std::mt19937_64 rng(23);
    const auto l = small_lists();
    // Loosen the base profile so a useful share of random paragraphs is accepted.
    TextFilterParams base;
    base.paragraph.min_common_word_ratio = 0.5;
    base.paragraph.min_stop_word_ratio = 0.1;
    int accepted = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto s = random_paragraph(rng);
        const bool before = filter_paragraph(s, base, l, {}).accepted();
        for (std::size_t f = 0; f < 12; ++f) {
            TextFilterParams relaxed = base;
            double& c = *cutoff_fields(relaxed.paragraph)[f];
            const double step = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
            c = is_min_field(f) ? c - step * std::max(1.0, c) : c + step * std::max(1.0, c);
            const bool after = filter_paragraph(s, relaxed, l, {}).accepted();
            if (before) CHECK(after);
        }
        accepted += before;
    }
    CHECK(accepted > 20);
}

TEST_CASE("property: node-level cleaning is idempotent") {
    std::mt19937_64 rng(29);
    const auto l = small_lists();
    TextFilterParams tp;
    tp.paragraph.min_common_word_ratio = 0.5;
    tp.paragraph.min_stop_word_ratio = 0.1;
    ImageFilterParams ip;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Segment> segs;
        bool last_text = false;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            if (!last_text && rng() % 2) {
                std::string body;
                const int paras = 1 + static_cast<int>(rng() % 4);
                for (int k = 0; k < paras; ++k) body += (k ? "\n" : "") + random_paragraph(rng);
                segs.push_back(testing::text(body));
                last_text = true;
            } else {
                const int w = 50 + static_cast<int>(rng() % 1000), h = 50 + static_cast<int>(rng() % 1000);
                const char* name = rng() % 5 == 0 ? "icon" : "photo";
                segs.push_back(testing::image("http://x.org/" + std::string(name) + std::to_string(i) + ".jpg", w, h));
                last_text = false;
            }
        }
        auto once = filter_document(testing::doc("d", "http://x.org/", 1, segs), tp, ip, l, {});
        auto twice = filter_document(once.nodes.document, tp, ip, l, {});
        CHECK(twice.nodes.document == once.nodes.document);
        CHECK(twice.nodes.paragraphs_removed == 0);
        CHECK(twice.nodes.images_removed == 0);
    }
}

}  // TEST_SUITE

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <fstream>
#include <thread>

#include "mmweb/json_io.hpp"
#include "mmweb/safety.hpp"
#include "support.hpp"

using namespace mmweb;

namespace {

struct LocalServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    LocalServer() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~LocalServer() {
        server.stop();
        thread.join();
    }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port) + path; }
};

std::vector<MultimodalDocument> random_corpus(std::mt19937_64& rng, std::size_t n) {
    std::vector<MultimodalDocument> docs;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Segment> segs;
        bool last_text = false;
        const int k = 1 + static_cast<int>(rng() % 7);
        for (int j = 0; j < k; ++j) {
            if (!last_text && rng() % 2) {
                segs.push_back(testing::text(testing::random_words(rng, 1 + rng() % 8, 50) + "\n" +
                                             testing::random_words(rng, 1 + rng() % 8, 50)));
                last_text = true;
            } else {
                static const char* names[] = {"river", "sex-ed", "xxx", "bridge", "town", "essex"};
                segs.push_back(testing::image("http://img.org/" + std::string(names[rng() % 6]) +
                                              std::to_string(rng() % 5) + ".jpg"));
                last_text = false;
            }
        }
        docs.push_back(testing::doc("d" + std::to_string(i), "http://x.org/" + std::to_string(i), 1, segs));
    }
    return docs;
}

}  // namespace

TEST_SUITE("safety") {

TEST_CASE("local list removes only listed images") {
    auto d = testing::doc("d", "http://x.org/", 1,
                          {testing::text("intro"), testing::image("http://i.org/u1.jpg"),
                           testing::image("http://i.org/u2.jpg")});
    std::vector<MultimodalDocument> docs{d};
    LocalListClient client({"http://i.org/u1.jpg"});
    auto r = remove_opted_out(docs, client);
    CHECK(r.images_checked == 2);
    CHECK(r.images_removed == 1);
    REQUIRE(docs[0].segments.size() == 2);
    CHECK(std::get<TextSegment>(docs[0].segments[0]).body == "intro");
    CHECK(std::get<ImageSegment>(docs[0].segments[1]).src_url == "http://i.org/u2.jpg");
}

TEST_CASE("local list file") {
    testing::TempDir dir;
    std::ofstream(dir / "optout.txt") << "# opted out\nhttp://i.org/a.jpg\n\n  http://i.org/b.jpg  \n";
    auto client = LocalListClient::load(dir / "optout.txt");
    std::vector<std::string> urls{"http://i.org/a.jpg", "http://i.org/c.jpg", "http://i.org/b.jpg"};
    CHECK(client.opted_out(urls) == std::vector<bool>{true, false, true});
    CHECK_THROWS_AS(LocalListClient::load(dir / "absent.txt"), Error);
}

TEST_CASE("NSFW URL substring table") {
    const std::vector<std::string> banned{"porn", "sex", "xxx"};
    const std::vector<std::pair<std::string, bool>> table{
        {"http://x.org/img/xxx-thumb.jpg", true},
        {"http://x.org/PORN/a.jpg", true},
        {"http://x.org/images/XXX.png", true},
        {"http://x.org/pornography-law.jpg", true},
        {"http://essex-news.co.uk/a.jpg", true},  // accepted collateral
        {"http://x.org/Middlesex.jpg", true},     // accepted collateral
        {"http://x.org/sussex-downs.jpg", true},  // accepted collateral
        {"http://x.org/sextant.jpg", true},       // accepted collateral
        {"http://x.org/sexy-beach.jpg", true},
        {"http://x.org/river.jpg", false},
        {"http://x.org/sea-view.jpg", false},
        {"http://x.org/s-e-x.jpg", false},
        {"http://x.org/xx.jpg", false},
        {"http://x.org/six.jpg", false},
        {"http://x.org/por-n.jpg", false},
    };
    REQUIRE(table.size() == 15);
    for (const auto& [url, want] : table) {
        CAPTURE(url);
        CHECK(nsfw_url(url, banned) == want);
    }
}

TEST_CASE("NSFW modes") {
    auto make = [] {
        return std::vector<MultimodalDocument>{
            testing::doc("a", "http://x.org/a", 1,
                         {testing::text("a"), testing::image("http://i.org/xxx-thumb.jpg"), testing::text("b"),
                          testing::image("http://i.org/ok.jpg")}),
            testing::doc("b", "http://x.org/b", 1, {testing::text("c"), testing::image("http://i.org/flagged.jpg")}),
            testing::doc("c", "http://x.org/c", 1, {testing::image("http://i.org/clean.jpg")})};
    };
    CHECK(nsfw_mode_from_string("external-model") == NsfwMode::external_model);
    CHECK(to_string(NsfwMode::url_heuristic_only) == "url-heuristic-only");
    CHECK_THROWS_AS(nsfw_mode_from_string("strict"), Error);
    CHECK(NsfwParams{}.cutoff == 0.9);

    SUBCASE("always-safe is the identity") {
        auto docs = make();
        NsfwParams p;
        p.mode = NsfwMode::always_safe;
        auto r = remove_nsfw(docs, p, nullptr);
        CHECK(docs == make());
        CHECK(r.images_removed == 0);
    }
    SUBCASE("URL rule removes the image and merges text") {
        auto docs = make();
        auto r = remove_nsfw(docs, {}, nullptr);
        CHECK(r.images_removed == 1);
        CHECK(r.documents_dropped == 0);
        REQUIRE(docs[0].segments.size() == 2);
        CHECK(std::get<TextSegment>(docs[0].segments[0]).body == "a\nb");
    }
    SUBCASE("a scorer hit above the cutoff drops the whole document") {
        auto docs = make();
        NsfwParams p;
        p.mode = NsfwMode::external_model;
        ScoredManifestScorer scorer({{"http://i.org/flagged.jpg", 0.95}, {"http://i.org/clean.jpg", 0.9}});
        auto r = remove_nsfw(docs, p, &scorer);
        CHECK(r.documents_dropped == 1);
        REQUIRE(docs.size() == 2);
        CHECK(docs[0].id == "a");
        CHECK(docs[1].id == "c");  // 0.9 is not strictly above the cutoff
        CHECK(scorer.unscored() == 1);
        auto again = make();
        CHECK_THROWS_AS(remove_nsfw(again, p, nullptr), Error);
    }
    SUBCASE("scored manifest file") {
        testing::TempDir dir;
        std::ofstream(dir / "scores.jsonl") << R"({"url":"http://i.org/a.jpg","score":0.25})" << "\n";
        auto s = ScoredManifestScorer::load(dir / "scores.jsonl");
        std::vector<std::string> urls{"http://i.org/a.jpg"};
        CHECK(s.score(urls) == std::vector<double>{0.25});
        CHECK_THROWS_AS(ScoredManifestScorer({{"u", 1.5}}), Error);
    }
}

TEST_CASE("property: allow-all plus always-safe is the identity") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        auto docs = random_corpus(rng, 1 + rng() % 20);
        const auto before = docs;
        AllowAllClient allow;
        remove_opted_out(docs, allow);
        NsfwParams p;
        p.mode = NsfwMode::always_safe;
        remove_nsfw(docs, p, nullptr);
        CHECK(docs == before);
    }
}

TEST_CASE("property: safety stages never alter text bytes") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        auto docs = random_corpus(rng, 1 + rng() % 20);
        const auto before = docs;
        std::unordered_set<std::string> listed;
        for (const auto& d : docs)
            for (const auto& u : d.image_urls())
                if (rng() % 3 == 0) listed.insert(u);
        LocalListClient client(listed);
        remove_opted_out(docs, client);
        remove_nsfw(docs, {}, nullptr);
        REQUIRE(docs.size() == before.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            CHECK(docs[i].text() == before[i].text());
            for (const auto& u : docs[i].image_urls()) {
                CHECK_FALSE(listed.count(u));
                CHECK_FALSE(nsfw_url(u, NsfwParams{}.banned_substrings));
            }
        }
    }
}

TEST_CASE("HTTP batch client against a local server") {
    LocalServer srv;
    std::atomic<int> posts{0};
    srv.server.Post("/check", [&](const httplib::Request& req, httplib::Response& res) {
        ++posts;
        json answer = json::array();
        for (const auto& u : json::parse(req.body)) answer.push_back(u.get<std::string>().find("optout") != std::string::npos);
        res.set_content(answer.dump(), "application/json");
    });
    srv.server.Post("/broken", [&](const httplib::Request&, httplib::Response& res) {
        ++posts;
        res.status = 500;
    });
    srv.server.Post("/short", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("[]", "application/json");
    });
    std::atomic<int> flaky_calls{0};
    srv.server.Post("/flaky", [&](const httplib::Request& req, httplib::Response& res) {
        if (flaky_calls++ == 0) {
            res.status = 503;
            return;
        }
        res.set_content(json(std::vector<bool>(json::parse(req.body).size(), false)).dump(), "application/json");
    });

    const std::vector<std::string> urls{"http://i.org/1.jpg", "http://i.org/optout-2.jpg", "http://i.org/3.jpg",
                                        "http://i.org/optout-4.jpg", "http://i.org/5.jpg"};
    HttpBatchOptions o;
    o.batch_size = 2;
    o.timeout = std::chrono::milliseconds(2000);

    SUBCASE("answers come back in request order across batches") {
        o.endpoint = srv.url("/check");
        HttpBatchClient c(o);
        CHECK(c.opted_out(urls) == std::vector<bool>{false, true, false, true, false});
        CHECK(posts == 3);
        CHECK(c.failed_batches() == 0);
    }
    SUBCASE("failed batches are fail-closed by default after retries") {
        o.endpoint = srv.url("/broken");
        o.retries = 2;
        HttpBatchClient c(o);
        CHECK(c.opted_out(urls) == std::vector<bool>(5, true));
        CHECK(posts == 9);
        CHECK(c.failed_batches() == 3);
    }
    SUBCASE("fail-open treats unresolved URLs as allowed") {
        o.endpoint = srv.url("/short");
        o.retries = 0;
        o.fail_closed = false;
        HttpBatchClient c(o);
        CHECK(c.opted_out(urls) == std::vector<bool>(5, false));
        CHECK(c.failed_batches() == 3);
    }
    SUBCASE("a transient failure is retried") {
        o.endpoint = srv.url("/flaky");
        o.batch_size = 10;
        HttpBatchClient c(o);
        CHECK(c.opted_out(urls) == std::vector<bool>(5, false));
        CHECK(c.failed_batches() == 0);
    }
    SUBCASE("endpoint must be plain http") {
        o.endpoint = "https://127.0.0.1/check";
        CHECK_THROWS_AS(HttpBatchClient{o}, Error);
        o.endpoint = srv.url("/check");
        o.batch_size = 0;
        CHECK_THROWS_AS(HttpBatchClient{o}, Error);
    }
}

TEST_CASE("unreachable opt-out service removes every image when fail-closed") {
    HttpBatchOptions o;
    o.endpoint = "http://127.0.0.1:1/check";
    o.retries = 1;
    o.timeout = std::chrono::milliseconds(300);
    HttpBatchClient c(o);
    std::vector<MultimodalDocument> docs{testing::doc(
        "d", "http://x.org/", 1, {testing::text("a"), testing::image("http://i.org/1.jpg"), testing::text("b")})};
    auto r = remove_opted_out(docs, c);
    CHECK(r.images_removed == 1);
    CHECK(docs[0].text() == "a\nb");
}

}  // TEST_SUITE

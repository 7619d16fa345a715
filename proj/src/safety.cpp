#include "mmweb/safety.hpp"

#include <httplib.h>

#include <atomic>
#include <mutex>
#include <thread>

#include "mmweb/json_io.hpp"
#include "mmweb/text.hpp"
#include "mmweb/url.hpp"

namespace mmweb {

namespace {

std::vector<std::string> distinct_image_urls(const std::vector<MultimodalDocument>& docs) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& d : docs) {
        for (auto& u : d.image_urls()) {
            if (seen.insert(u).second) out.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace

std::vector<bool> AllowAllClient::opted_out(std::span<const std::string> urls) {
    return std::vector<bool>(urls.size(), false);
}

LocalListClient LocalListClient::load(const std::filesystem::path& path) {
    std::unordered_set<std::string> urls;
    const std::string content = read_file(path);
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string::npos) nl = content.size();
        auto line = text::trim(std::string_view(content).substr(pos, nl - pos));
        pos = nl + 1;
        if (!line.empty() && line.front() != '#') urls.emplace(line);
    }
    return LocalListClient(std::move(urls));
}

std::vector<bool> LocalListClient::opted_out(std::span<const std::string> urls) {
    std::vector<bool> out;
    out.reserve(urls.size());
    for (const auto& u : urls) out.push_back(urls_.count(u) > 0);
    return out;
}

HttpBatchClient::HttpBatchClient(HttpBatchOptions options) : options_(std::move(options)) {
    if (!is_absolute_http_url(options_.endpoint) || split_url(options_.endpoint).scheme != "http")
        throw Error("opt-out endpoint must be an http:// URL: " + options_.endpoint);
    if (options_.batch_size == 0) throw Error("opt-out batch size must be positive");
}

bool HttpBatchClient::query(std::span<const std::string> batch, std::vector<bool>& out) const {
    const UrlParts parts = split_url(options_.endpoint);
    httplib::Client client("http://" + *parts.authority);
    const auto ms = options_.timeout.count();
    client.set_connection_timeout(ms / 1000, (ms % 1000) * 1000);
    client.set_read_timeout(ms / 1000, (ms % 1000) * 1000);
    const std::string path = parts.path.empty() ? "/" : parts.path;
    const json body(std::vector<std::string>(batch.begin(), batch.end()));
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res || res->status != 200) continue;
        try {
            auto answer = json::parse(res->body);
            if (!answer.is_array() || answer.size() != batch.size()) continue;
            out.clear();
            for (const auto& v : answer) out.push_back(v.get<bool>());
            return true;
        } catch (const std::exception&) {
            continue;
        }
    }
    return false;
}

std::vector<bool> HttpBatchClient::opted_out(std::span<const std::string> urls) {
    const std::size_t batches = (urls.size() + options_.batch_size - 1) / options_.batch_size;
    std::vector<std::vector<bool>> answers(batches);
    std::vector<char> ok(batches, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t b = next.fetch_add(1);
            if (b >= batches) return;
            const std::size_t start = b * options_.batch_size;
            const auto batch = urls.subspan(start, std::min(options_.batch_size, urls.size() - start));
            ok[b] = query(batch, answers[b]);
            if (!ok[b]) answers[b].assign(batch.size(), options_.fail_closed);
        }
    };
    std::vector<std::thread> threads;
    const std::size_t n = std::max<std::size_t>(1, std::min(options_.max_in_flight, batches));
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::vector<bool> out;
    out.reserve(urls.size());
    for (std::size_t b = 0; b < batches; ++b) {
        if (!ok[b]) ++failed_batches_;
        out.insert(out.end(), answers[b].begin(), answers[b].end());
    }
    return out;
}

OptOutReport remove_opted_out(std::vector<MultimodalDocument>& docs, OptOutClient& client) {
    const auto urls = distinct_image_urls(docs);
    const auto answers = client.opted_out(urls);
    if (answers.size() != urls.size()) throw Error("opt-out client returned a wrong number of answers");
    std::unordered_set<std::string> blocked;
    for (std::size_t i = 0; i < urls.size(); ++i) {
        if (answers[i]) blocked.insert(urls[i]);
    }
    OptOutReport r;
    r.images_checked = urls.size();
    for (auto& d : docs) {
        r.images_removed += remove_images(d, [&](const ImageSegment& img) { return blocked.count(img.src_url) > 0; });
    }
    return r;
}

ScoredManifestScorer::ScoredManifestScorer(std::unordered_map<std::string, double> scores)
    : scores_(std::move(scores)) {
    for (const auto& [url, s] : scores_) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error("NSFW score outside [0, 1] for " + url);
    }
}

ScoredManifestScorer ScoredManifestScorer::load(const std::filesystem::path& path) {
    std::unordered_map<std::string, double> scores;
    for_each_jsonl(path, [&](const json& j) { scores[j.at("url").get<std::string>()] = j.at("score").get<double>(); });
    return ScoredManifestScorer(std::move(scores));
}

std::vector<double> ScoredManifestScorer::score(std::span<const std::string> urls) {
    std::vector<double> out;
    out.reserve(urls.size());
    for (const auto& u : urls) {
        auto it = scores_.find(u);
        if (it == scores_.end()) {
            ++unscored_;
            out.push_back(0.0);
        } else {
            out.push_back(it->second);
        }
    }
    return out;
}

NsfwMode nsfw_mode_from_string(std::string_view s) {
    if (s == "always-safe") return NsfwMode::always_safe;
    if (s == "url-heuristic-only") return NsfwMode::url_heuristic_only;
    if (s == "external-model") return NsfwMode::external_model;
    throw Error("unknown NSFW mode '" + std::string(s) + "'");
}

std::string_view to_string(NsfwMode m) {
    switch (m) {
        case NsfwMode::always_safe: return "always-safe";
        case NsfwMode::url_heuristic_only: return "url-heuristic-only";
        case NsfwMode::external_model: return "external-model";
    }
    return "?";
}

bool nsfw_url(std::string_view url, std::span<const std::string> banned) {
    for (const auto& b : banned) {
        if (text::contains_icase(url, b)) return true;
    }
    return false;
}

NsfwReport remove_nsfw(std::vector<MultimodalDocument>& docs, const NsfwParams& params, NsfwScorer* scorer) {
    NsfwReport r;
    if (params.mode == NsfwMode::always_safe) return r;
    for (auto& d : docs) {
        r.images_removed += remove_images(
            d, [&](const ImageSegment& img) { return nsfw_url(img.src_url, params.banned_substrings); });
    }
    if (params.mode != NsfwMode::external_model) return r;
    if (!scorer) throw Error("external-model NSFW mode needs a scorer");

    const auto urls = distinct_image_urls(docs);
    const auto scores = scorer->score(urls);
    if (scores.size() != urls.size()) throw Error("NSFW scorer returned a wrong number of scores");
    std::unordered_set<std::string> flagged;
    for (std::size_t i = 0; i < urls.size(); ++i) {
        if (scores[i] > params.cutoff) flagged.insert(urls[i]);
    }
    const auto before = docs.size();
    std::erase_if(docs, [&](const MultimodalDocument& d) {
        for (const auto& u : d.image_urls()) {
            if (flagged.count(u)) return true;
        }
        return false;
    });
    r.documents_dropped = before - docs.size();
    return r;
}

}  // namespace mmweb

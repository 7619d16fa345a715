#include "mmweb/fetch.hpp"

#include <httplib.h>

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mmweb/image_probe.hpp"
#include "mmweb/url.hpp"

namespace mmweb {

namespace {

FetchResult from_bytes(const std::string& url, std::string_view bytes) {
    auto info = probe_image(bytes);
    if (!info) return FetchResult::failure(url);
    FetchResult r;
    r.src_url = url;
    r.status = FetchStatus::ok;
    r.width = info->width;
    r.height = info->height;
    r.format = info->format;
    return r;
}

}  // namespace

FixtureFetcher::FixtureFetcher(std::filesystem::path dir) : dir_(std::move(dir)) {
    const auto index = dir_ / "index.tsv";
    std::ifstream in(index);
    if (!in) throw Error("cannot open fixture image index " + index.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        files_[line.substr(0, tab)] = line.substr(tab + 1);
    }
}

std::vector<FetchResult> FixtureFetcher::fetch(std::span<const std::string> urls) {
    std::vector<FetchResult> out;
    out.reserve(urls.size());
    for (const auto& url : urls) {
        auto it = files_.find(url);
        if (it == files_.end() || !std::filesystem::exists(dir_ / it->second)) {
            out.push_back(FetchResult::failure(url));
            continue;
        }
        std::ifstream f(dir_ / it->second, std::ios::binary);
        std::string head(4096, '\0');
        f.read(head.data(), static_cast<std::streamsize>(head.size()));
        head.resize(static_cast<std::size_t>(f.gcount()));
        out.push_back(from_bytes(url, head));
    }
    return out;
}

FetchResult HttpFetcher::fetch_one(const std::string& url) const {
    const UrlParts parts = split_url(url);
    if (!parts.scheme || *parts.scheme != "http" || !parts.authority) return FetchResult::failure(url);
    httplib::Client client("http://" + *parts.authority);
    const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout).count();
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    client.set_follow_location(true);
    std::string path = parts.path.empty() ? "/" : parts.path;
    if (parts.query) path += "?" + *parts.query;
    std::string body;
    auto res = client.Get(path, [&](const char* data, std::size_t len) {
        body.append(data, len);
        return body.size() < options_.max_bytes;
    });
    if (body.empty() || (res && res->status != 200)) return FetchResult::failure(url);
    return from_bytes(url, body);
}

std::vector<FetchResult> HttpFetcher::fetch(std::span<const std::string> urls) {
    std::vector<FetchResult> out(urls.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::unordered_map<std::string, std::chrono::steady_clock::time_point> next_slot;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= urls.size()) return;
            const std::string host = url_host(urls[i]);
            std::chrono::steady_clock::time_point slot;
            {
                std::lock_guard lock(mu);
                const auto now = std::chrono::steady_clock::now();
                auto& s = next_slot[host];
                slot = std::max(now, s);
                s = slot + options_.politeness_delay;
            }
            std::this_thread::sleep_until(slot);
            out[i] = fetch_one(urls[i]);
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(options_.max_in_flight, urls.size()));
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return out;
}

void fetch_missing(ImageFetcher& fetcher, std::span<const std::string> urls, FetchResults& cache) {
    std::vector<std::string> todo;
    for (const auto& u : urls) {
        if (!cache.count(u)) todo.push_back(u);
    }
    if (todo.empty()) return;
    for (auto& r : fetcher.fetch(todo)) {
        std::string key = r.src_url;
        cache.insert_or_assign(std::move(key), std::move(r));
    }
}

}  // namespace mmweb

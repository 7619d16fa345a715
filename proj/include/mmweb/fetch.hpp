#pragma once

#include <chrono>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmweb/extract.hpp"

namespace mmweb {

/// Source of image metadata. Results come back in request order.
class ImageFetcher {
public:
    virtual ~ImageFetcher() = default;
    virtual std::vector<FetchResult> fetch(std::span<const std::string> urls) = 0;
};

/// Serves images from a local directory. `index.tsv` maps each URL to a
/// file path relative to the directory; unknown URLs fail.
class FixtureFetcher final : public ImageFetcher {
public:
    explicit FixtureFetcher(std::filesystem::path dir);
    std::vector<FetchResult> fetch(std::span<const std::string> urls) override;

private:
    std::filesystem::path dir_;
    std::unordered_map<std::string, std::filesystem::path> files_;
};

struct HttpFetcherOptions {
    std::size_t max_in_flight = 8;
    std::chrono::milliseconds politeness_delay{250};  // between requests to one host
    std::chrono::seconds timeout{10};
    std::size_t max_bytes = 1 << 22;
};

/// Plain-http image fetcher with bounded concurrency and per-host spacing.
class HttpFetcher final : public ImageFetcher {
public:
    explicit HttpFetcher(HttpFetcherOptions options = {}) : options_(options) {}
    std::vector<FetchResult> fetch(std::span<const std::string> urls) override;

private:
    FetchResult fetch_one(const std::string& url) const;

    HttpFetcherOptions options_;
};

/// Fetches every URL not already in `cache` and adds the results to it.
void fetch_missing(ImageFetcher& fetcher, std::span<const std::string> urls, FetchResults& cache);

}  // namespace mmweb

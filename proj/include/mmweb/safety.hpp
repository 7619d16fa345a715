#pragma once

#include <chrono>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmweb/document.hpp"

namespace mmweb {

/// Answers whether the creator of each image opted out of AI training.
/// Implementations never see or modify documents.
class OptOutClient {
public:
    virtual ~OptOutClient() = default;
    /// One answer per URL, in order; true means opted out.
    virtual std::vector<bool> opted_out(std::span<const std::string> urls) = 0;
};

class AllowAllClient final : public OptOutClient {
public:
    std::vector<bool> opted_out(std::span<const std::string> urls) override;
};

/// Opted-out URLs listed one per line ('#' comments allowed).
class LocalListClient final : public OptOutClient {
public:
    explicit LocalListClient(std::unordered_set<std::string> urls) : urls_(std::move(urls)) {}
    static LocalListClient load(const std::filesystem::path& path);
    std::vector<bool> opted_out(std::span<const std::string> urls) override;

private:
    std::unordered_set<std::string> urls_;
};

struct HttpBatchOptions {
    std::string endpoint;  // http://host[:port]/path
    std::size_t batch_size = 100;
    std::size_t max_in_flight = 4;
    std::chrono::milliseconds timeout{5000};
    int retries = 3;
    /// When a batch still fails after all retries: true treats its URLs as
    /// opted out, false as allowed.
    bool fail_closed = true;
};

/// POSTs each batch as a JSON array of URL strings and expects a JSON array
/// of booleans of the same length back.
class HttpBatchClient final : public OptOutClient {
public:
    explicit HttpBatchClient(HttpBatchOptions options);
    std::vector<bool> opted_out(std::span<const std::string> urls) override;
    std::size_t failed_batches() const { return failed_batches_; }

private:
    bool query(std::span<const std::string> batch, std::vector<bool>& out) const;

    HttpBatchOptions options_;
    std::size_t failed_batches_ = 0;
};

struct OptOutReport {
    std::size_t images_checked = 0;  // distinct URLs queried
    std::size_t images_removed = 0;  // segments removed
};

/// Removes opted-out image segments; surrounding text merges. Text bytes of
/// surviving segments are unchanged apart from that merge.
OptOutReport remove_opted_out(std::vector<MultimodalDocument>& docs, OptOutClient& client);

/// Probability in [0, 1] that each image is NSFW.
class NsfwScorer {
public:
    virtual ~NsfwScorer() = default;
    virtual std::vector<double> score(std::span<const std::string> urls) = 0;
};

/// Scores read from a JSONL manifest of {"url": ..., "score": ...} lines,
/// produced by any external classifier. Unlisted URLs score 0.
class ScoredManifestScorer final : public NsfwScorer {
public:
    explicit ScoredManifestScorer(std::unordered_map<std::string, double> scores);
    static ScoredManifestScorer load(const std::filesystem::path& path);
    std::vector<double> score(std::span<const std::string> urls) override;
    std::size_t unscored() const { return unscored_; }

private:
    std::unordered_map<std::string, double> scores_;
    std::size_t unscored_ = 0;
};

enum class NsfwMode {
    always_safe,         // nothing is removed
    url_heuristic_only,  // URL substring rule only
    external_model,      // URL substring rule, then scorer
};

NsfwMode nsfw_mode_from_string(std::string_view s);
std::string_view to_string(NsfwMode m);

struct NsfwParams {
    NsfwMode mode = NsfwMode::url_heuristic_only;
    std::vector<std::string> banned_substrings{"porn", "sex", "xxx"};
    double cutoff = 0.9;  // documents with an image scored strictly above are dropped
};

/// Case-insensitive substring test of the NSFW URL rule.
bool nsfw_url(std::string_view url, std::span<const std::string> banned);

struct NsfwReport {
    std::size_t images_removed = 0;
    std::size_t documents_dropped = 0;
};

/// `scorer` is required only in external_model mode.
NsfwReport remove_nsfw(std::vector<MultimodalDocument>& docs, const NsfwParams& params, NsfwScorer* scorer);

}  // namespace mmweb

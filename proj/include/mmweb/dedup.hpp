#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmweb/document.hpp"

namespace mmweb {

/// (fetch_time, doc id); the greater pair is the more recent document.
using Recency = std::pair<std::int64_t, std::string>;

/// Shard-local counts that merge associatively and commutatively, so shards
/// can be counted in parallel and combined in any order.
struct CorpusCounters {
    std::map<std::string, std::uint64_t> image_urls;  // documents containing the URL
    std::map<std::pair<std::string, std::uint64_t>, std::uint64_t> paragraphs;  // (domain, hash) -> occurrences
    std::map<std::string, Recency> latest_by_url;
    std::map<std::uint64_t, Recency> latest_by_image_set;

    void merge(const CorpusCounters& other);
    bool operator==(const CorpusCounters&) const = default;

    /// Tab-separated lines, one key per line, sorted.
    void save(const std::filesystem::path& path) const;
    static CorpusCounters load(const std::filesystem::path& path);
};

/// Identity of a paragraph for domain dedup: NFC with trailing whitespace removed.
std::uint64_t paragraph_key(std::string_view paragraph);

/// Order-insensitive hash of the distinct image URLs; 0 for a document without images.
std::uint64_t image_set_key(const MultimodalDocument& doc);

/// Keeps the first occurrence of each image URL. Returns the number removed.
std::size_t dedup_images_within_document(MultimodalDocument& doc);

void count_image_urls(std::span<const MultimodalDocument> docs, CorpusCounters& counters);
void count_paragraphs(std::span<const MultimodalDocument> docs, CorpusCounters& counters);
void count_latest_by_url(std::span<const MultimodalDocument> docs, CorpusCounters& counters);
void count_latest_by_image_set(std::span<const MultimodalDocument> docs, CorpusCounters& counters);

/// Removes repeated images within each document, then every image whose URL
/// appears in more than `max_occurrences` documents. Returns images removed.
std::size_t drop_overused_images(std::vector<MultimodalDocument>& docs, const CorpusCounters& counters,
                                 std::uint64_t max_occurrences = 10);

/// True when `doc` is the most recent document carrying its URL.
bool survives_url_dedup(const MultimodalDocument& doc, const CorpusCounters& counters);
/// True when `doc` has no images or is the most recent with its image set.
bool survives_image_set_dedup(const MultimodalDocument& doc, const CorpusCounters& counters);

/// Removes every occurrence of paragraphs counted at least `min_count` times
/// in the document's domain. Images are untouched. Returns paragraphs removed.
std::size_t remove_repeated_paragraphs(MultimodalDocument& doc, const CorpusCounters& counters,
                                       std::uint64_t min_count = 3);

// Single-pass conveniences over an in-memory corpus. Each returns the
// surviving documents in their original order.
std::vector<MultimodalDocument> dedup_documents_by_url(std::vector<MultimodalDocument> docs);
std::vector<MultimodalDocument> dedup_documents_by_image_set(std::vector<MultimodalDocument> docs);
/// Documents left without text are dropped.
std::vector<MultimodalDocument> dedup_paragraphs_by_domain(std::vector<MultimodalDocument> docs,
                                                           std::uint64_t min_count = 3);
std::vector<MultimodalDocument> dedup_images(std::vector<MultimodalDocument> docs,
                                             std::uint64_t max_occurrences = 10);

}  // namespace mmweb

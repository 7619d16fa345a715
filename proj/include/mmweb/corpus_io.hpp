#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmweb/document.hpp"
#include "mmweb/json_io.hpp"

namespace mmweb {

/// One crawled page.
struct PageRecord {
    std::string url;
    std::int64_t fetch_time = 0;  // epoch seconds, UTC
    std::string raw_html;
    std::string content_type = "text/html";

    bool operator==(const PageRecord&) const = default;
};

enum class SourceFormat { warc, html_dir, jsonl };

SourceFormat source_format_from_string(std::string_view tag);
std::string_view to_string(SourceFormat f);

struct ReadStats {
    std::size_t yielded = 0;
    std::size_t skipped_non_html = 0;
    std::size_t skipped_non_response = 0;
    std::size_t malformed = 0;
    std::size_t out_of_order = 0;  // fetch_time decreased; a warning only
    std::vector<std::string> warnings;

    std::size_t skipped() const { return skipped_non_html + skipped_non_response + malformed; }
    std::size_t total() const { return yielded + skipped(); }
};

/// Single-consumer stream of pages in archive order.
class PageStream {
public:
    virtual ~PageStream() = default;
    virtual std::optional<PageRecord> next() = 0;
    const ReadStats& stats() const { return stats_; }

protected:
    void note_time(std::int64_t t);
    void warn(std::string msg);

    ReadStats stats_;

private:
    std::optional<std::int64_t> last_time_;
};

/// Opens a page source. Throws Error when the source cannot be read at all.
std::unique_ptr<PageStream> open_page_stream(const std::filesystem::path& source, SourceFormat format);

std::vector<PageRecord> read_pages(const std::filesystem::path& source, SourceFormat format,
                                   ReadStats* stats = nullptr);

/// Writes WARC/1.0 response records; with `gzip`, one gzip member per record.
void write_warc(const std::filesystem::path& path, std::span<const PageRecord> pages, bool gzip = true);

json to_json(const PageRecord& page);
PageRecord page_from_json(const json& j);
void write_pages_jsonl(const std::filesystem::path& path, std::span<const PageRecord> pages);

std::int64_t parse_iso8601(std::string_view s);
std::string format_iso8601(std::int64_t epoch_seconds);

/// Set of input shards of a single format.
struct CorpusManifest {
    std::vector<std::filesystem::path> shards;
    std::vector<std::size_t> record_counts;
    SourceFormat format = SourceFormat::warc;

    /// Throws Error if any shard is missing.
    static CorpusManifest open(std::vector<std::filesystem::path> shards, SourceFormat format);
    /// Reads every shard, filling record_counts with yielded records.
    void count_records();
};

/// Validates every document first, then writes one JSON record per line.
std::size_t write_documents(std::span<const MultimodalDocument> docs, const std::filesystem::path& path);
std::vector<MultimodalDocument> read_documents(const std::filesystem::path& path);

/// Texts/images parallel-list view of a document. Exactly one of texts[i]
/// and images[i] is set for every i.
struct ParallelArrays {
    std::string url;
    std::int64_t fetch_time = 0;
    std::vector<std::optional<std::string>> texts;
    std::vector<std::optional<std::string>> images;
    std::vector<std::optional<ImageSegment>> image_metadata;

    bool operator==(const ParallelArrays&) const = default;
};

ParallelArrays export_parallel_arrays(const MultimodalDocument& doc);
MultimodalDocument import_parallel_arrays(const ParallelArrays& arrays);
json to_json(const ParallelArrays& arrays);

}  // namespace mmweb

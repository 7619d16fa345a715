#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mmweb/document.hpp"
#include "mmweb/dom.hpp"
#include "mmweb/json_io.hpp"

namespace mmweb {

/// Linearizes a simplified tree. Every element boundary is a paragraph break;
/// img elements become image segments resolved against `page_url`; the
/// end-of-document sentinel is kept as its own paragraph.
/// Throws Error("empty document") when the tree yields no text and no images.
MultimodalDocument extract_document(const DomTree& tree, const std::string& page_url, std::int64_t fetch_time,
                                    std::string id = {});

struct ManifestEntry {
    std::string url;
    std::vector<std::string> referrers;  // document ids (or URLs when ids are empty)

    bool operator==(const ManifestEntry&) const = default;
};

/// Unique image URLs in order of first appearance.
std::vector<ManifestEntry> harvest_image_urls(std::span<const MultimodalDocument> docs);

void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> manifest);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

enum class FetchStatus { ok, failed };

struct FetchResult {
    std::string src_url;
    FetchStatus status = FetchStatus::failed;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<ImageFormat> format;

    static FetchResult failure(std::string url);
    bool operator==(const FetchResult&) const = default;
};

json to_json(const FetchResult& r);
FetchResult fetch_result_from_json(const json& j);
void write_fetch_results(const std::filesystem::path& path, std::span<const FetchResult> results);
std::vector<FetchResult> read_fetch_results(const std::filesystem::path& path);

using FetchResults = std::unordered_map<std::string, FetchResult>;

/// Copies metadata from ok results; images with failed or missing results
/// are removed and the text around them merged.
MultimodalDocument attach_images(MultimodalDocument doc, const FetchResults& results);

}  // namespace mmweb

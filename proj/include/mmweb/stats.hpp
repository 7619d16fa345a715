#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmweb/document.hpp"
#include "mmweb/json_io.hpp"

namespace mmweb {

struct StatsReport {
    std::size_t documents = 0;
    std::size_t images = 0;
    std::size_t unique_images = 0;
    double unique_image_ratio = 0;  // unique / images; 0 without images
    std::size_t tokens = 0;         // whitespace tokens
    double median_images = 0;
    double median_tokens = 0;

    std::vector<std::size_t> doc_tokens;  // per document, corpus order
    std::vector<std::size_t> doc_images;
    std::map<std::size_t, std::size_t> images_histogram;  // images per doc -> docs
    std::map<std::size_t, std::size_t> tokens_histogram;  // lower bin edge -> docs
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint_histogram;  // (token bin, images) -> docs
    /// (x, % of images in documents with at most x images), x ascending.
    std::vector<std::pair<std::size_t, double>> image_cdf;
    std::vector<std::pair<std::string, std::size_t>> top_domains;  // by doc count, then name
};

/// Lower edges of the token histogram bins.
const std::vector<std::size_t>& token_bin_edges();

StatsReport stats_report(std::span<const MultimodalDocument> docs, std::size_t top_k = 10);
json to_json(const StatsReport& r);
std::string to_text(const StatsReport& r);

}  // namespace mmweb

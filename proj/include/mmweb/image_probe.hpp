#pragma once

#include <optional>
#include <string_view>

#include "mmweb/document.hpp"

namespace mmweb {

struct ImageInfo {
    ImageFormat format = ImageFormat::other;
    int width = 0;
    int height = 0;

    bool operator==(const ImageInfo&) const = default;
};

/// Reads format and dimensions from file headers only (PNG, JPEG, WebP
/// lossy/lossless/extended; GIF and BMP report ImageFormat::other).
std::optional<ImageInfo> probe_image(std::string_view bytes);

}  // namespace mmweb

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmweb/text.hpp"

namespace mmweb {

/// Raised when a document breaks one of its structural invariants.
class InvariantError : public Error {
public:
    using Error::Error;
};

enum class ImageFormat { jpg, png, webp, other };

std::string_view to_string(ImageFormat f);
ImageFormat image_format_from_string(std::string_view s);

struct TextSegment {
    std::string body;

    bool operator==(const TextSegment&) const = default;
};

struct ImageSegment {
    std::string src_url;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<ImageFormat> format;
    std::optional<std::string> alt;

    bool attached() const { return width && height && format; }
    bool operator==(const ImageSegment&) const = default;
};

using Segment = std::variant<TextSegment, ImageSegment>;

inline bool is_text(const Segment& s) { return std::holds_alternative<TextSegment>(s); }
inline bool is_image(const Segment& s) { return std::holds_alternative<ImageSegment>(s); }

/// An ordered sequence of text and image segments taken from one web page.
struct MultimodalDocument {
    std::string id;
    std::string url;
    std::int64_t fetch_time = 0;
    std::vector<Segment> segments;

    std::string domain() const;
    std::size_t image_count() const;
    /// Text segments joined with '\n'.
    std::string text() const;
    std::vector<std::string> image_urls() const;

    bool operator==(const MultimodalDocument&) const = default;
};

/// Throws InvariantError naming the first violated invariant.
void validate(const MultimodalDocument& doc);

/// Merges adjacent text segments with a '\n' separator, re-splits and trims
/// paragraphs, and drops text segments that end up empty.
std::vector<Segment> normalize_segments(std::vector<Segment> segments);

/// Appends text, merging into a trailing text segment when there is one.
void append_text(std::vector<Segment>& segments, std::string_view body);

/// Removes every image segment for which `drop` returns true, merging the
/// text segments that become adjacent. Returns the number removed.
std::size_t remove_images(MultimodalDocument& doc,
                          const std::function<bool(const ImageSegment&)>& drop);

}  // namespace mmweb

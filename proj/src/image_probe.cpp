#include "mmweb/image_probe.hpp"

#include <cstdint>
#include <cstdlib>

namespace mmweb {

namespace {

std::uint32_t be16(std::string_view b, std::size_t i) {
    return (static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << 8) | static_cast<unsigned char>(b[i + 1]);
}

std::uint32_t le16(std::string_view b, std::size_t i) {
    return static_cast<unsigned char>(b[i]) | (static_cast<std::uint32_t>(static_cast<unsigned char>(b[i + 1])) << 8);
}

std::uint32_t le24(std::string_view b, std::size_t i) {
    return le16(b, i) | (static_cast<std::uint32_t>(static_cast<unsigned char>(b[i + 2])) << 16);
}

std::uint32_t be32(std::string_view b, std::size_t i) {
    return (be16(b, i) << 16) | be16(b, i + 2);
}

std::uint32_t le32(std::string_view b, std::size_t i) {
    return le16(b, i) | (le16(b, i + 2) << 16);
}

std::optional<ImageInfo> make(ImageFormat f, std::int64_t w, std::int64_t h) {
    if (w < 1 || h < 1 || w > (1 << 30) || h > (1 << 30)) return std::nullopt;
    return ImageInfo{f, static_cast<int>(w), static_cast<int>(h)};
}

std::optional<ImageInfo> probe_jpeg(std::string_view b) {
    std::size_t i = 2;
    while (i + 4 <= b.size()) {
        if (static_cast<unsigned char>(b[i]) != 0xFF) return std::nullopt;
        auto marker = static_cast<unsigned char>(b[i + 1]);
        if (marker == 0xFF) {  // fill byte
            ++i;
            continue;
        }
        if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
            i += 2;
            continue;
        }
        if (marker == 0xD9 || marker == 0xDA) return std::nullopt;
        const std::uint32_t len = be16(b, i + 2);
        const bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
        if (sof) {
            if (i + 9 > b.size()) return std::nullopt;
            return make(ImageFormat::jpg, be16(b, i + 7), be16(b, i + 5));
        }
        i += 2 + len;
    }
    return std::nullopt;
}

std::optional<ImageInfo> probe_webp(std::string_view b) {
    if (b.size() < 25) return std::nullopt;
    const std::string_view chunk = b.substr(12, 4);
    if (chunk == "VP8 ") {
        if (b.size() < 30) return std::nullopt;
        if (static_cast<unsigned char>(b[23]) != 0x9D || static_cast<unsigned char>(b[24]) != 0x01 ||
            static_cast<unsigned char>(b[25]) != 0x2A)
            return std::nullopt;
        return make(ImageFormat::webp, le16(b, 26) & 0x3FFF, le16(b, 28) & 0x3FFF);
    }
    if (chunk == "VP8L") {
        if (static_cast<unsigned char>(b[20]) != 0x2F) return std::nullopt;
        const std::uint32_t bits = le32(b, 21);
        return make(ImageFormat::webp, (bits & 0x3FFF) + 1, ((bits >> 14) & 0x3FFF) + 1);
    }
    if (chunk == "VP8X") {
        if (b.size() < 30) return std::nullopt;
        return make(ImageFormat::webp, static_cast<std::int64_t>(le24(b, 24)) + 1,
                    static_cast<std::int64_t>(le24(b, 27)) + 1);
    }
    return std::nullopt;
}

}  // namespace

std::optional<ImageInfo> probe_image(std::string_view b) {
    if (b.size() >= 24 && b.substr(0, 8) == std::string_view("\x89PNG\r\n\x1a\n", 8) && b.substr(12, 4) == "IHDR")
        return make(ImageFormat::png, be32(b, 16), be32(b, 20));
    if (b.size() >= 4 && static_cast<unsigned char>(b[0]) == 0xFF && static_cast<unsigned char>(b[1]) == 0xD8)
        return probe_jpeg(b);
    if (b.size() >= 16 && b.substr(0, 4) == "RIFF" && b.substr(8, 4) == "WEBP") return probe_webp(b);
    if (b.size() >= 10 && (b.substr(0, 6) == "GIF87a" || b.substr(0, 6) == "GIF89a"))
        return make(ImageFormat::other, le16(b, 6), le16(b, 8));
    if (b.size() >= 26 && b.substr(0, 2) == "BM") {
        const auto h = static_cast<std::int32_t>(le32(b, 22));
        return make(ImageFormat::other, static_cast<std::int32_t>(le32(b, 18)), std::abs(static_cast<std::int64_t>(h)));
    }
    return std::nullopt;
}

}  // namespace mmweb

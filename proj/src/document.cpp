#include "mmweb/document.hpp"

#include "mmweb/url.hpp"

namespace mmweb {

std::string_view to_string(ImageFormat f) {
    switch (f) {
        case ImageFormat::jpg: return "jpg";
        case ImageFormat::png: return "png";
        case ImageFormat::webp: return "webp";
        case ImageFormat::other: return "other";
    }
    return "other";
}

ImageFormat image_format_from_string(std::string_view s) {
    if (s == "jpg" || s == "jpeg") return ImageFormat::jpg;
    if (s == "png") return ImageFormat::png;
    if (s == "webp") return ImageFormat::webp;
    return ImageFormat::other;
}

std::string MultimodalDocument::domain() const {
    return url_domain(url);
}

std::size_t MultimodalDocument::image_count() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += is_image(s) ? 1 : 0;
    return n;
}

std::string MultimodalDocument::text() const {
    std::string out;
    for (const auto& s : segments) {
        if (const auto* t = std::get_if<TextSegment>(&s)) {
            if (!out.empty()) out.push_back('\n');
            out += t->body;
        }
    }
    return out;
}

std::vector<std::string> MultimodalDocument::image_urls() const {
    std::vector<std::string> out;
    for (const auto& s : segments) {
        if (const auto* img = std::get_if<ImageSegment>(&s)) out.push_back(img->src_url);
    }
    return out;
}

void validate(const MultimodalDocument& doc) {
    if (!is_absolute_http_url(doc.url)) throw InvariantError("document url must be an absolute http(s) URL: " + doc.url);
    if (doc.segments.empty()) throw InvariantError("document must have at least one segment");
    bool prev_text = false;
    for (const auto& s : doc.segments) {
        if (const auto* t = std::get_if<TextSegment>(&s)) {
            if (prev_text) throw InvariantError("document has two adjacent text segments");
            if (text::trim(t->body).empty()) throw InvariantError("text segment is empty after trim");
            if (t->body.find("\n\n\n") != std::string::npos)
                throw InvariantError("text segment has 3+ consecutive newlines");
            prev_text = true;
        } else {
            const auto& img = std::get<ImageSegment>(s);
            if (!is_absolute_http_url(img.src_url))
                throw InvariantError("image segment url must be absolute: " + img.src_url);
            if ((img.width && *img.width < 1) || (img.height && *img.height < 1))
                throw InvariantError("attached image dimensions must be >= 1");
            prev_text = false;
        }
    }
}

namespace {

std::string join_paragraphs(std::string_view body) {
    std::string out;
    for (const auto& p : text::paragraphs(body)) {
        if (!out.empty()) out.push_back('\n');
        out += p;
    }
    return out;
}

}  // namespace

std::vector<Segment> normalize_segments(std::vector<Segment> segments) {
    std::vector<Segment> out;
    out.reserve(segments.size());
    for (auto& s : segments) {
        if (auto* t = std::get_if<TextSegment>(&s)) {
            append_text(out, t->body);
        } else {
            out.push_back(std::move(s));
        }
    }
    for (auto& s : out) {
        if (auto* t = std::get_if<TextSegment>(&s)) t->body = join_paragraphs(t->body);
    }
    std::erase_if(out, [](const Segment& s) {
        const auto* t = std::get_if<TextSegment>(&s);
        return t && t->body.empty();
    });
    return out;
}

void append_text(std::vector<Segment>& segments, std::string_view body) {
    if (text::trim(body).empty()) return;
    if (!segments.empty()) {
        if (auto* t = std::get_if<TextSegment>(&segments.back())) {
            t->body.push_back('\n');
            t->body.append(body);
            return;
        }
    }
    segments.emplace_back(TextSegment{std::string(body)});
}

std::size_t remove_images(MultimodalDocument& doc,
                          const std::function<bool(const ImageSegment&)>& drop) {
    std::size_t removed = 0;
    std::vector<Segment> kept;
    kept.reserve(doc.segments.size());
    for (auto& s : doc.segments) {
        if (const auto* img = std::get_if<ImageSegment>(&s); img && drop(*img)) {
            ++removed;
            continue;
        }
        if (auto* t = std::get_if<TextSegment>(&s)) {
            append_text(kept, t->body);
        } else {
            kept.push_back(std::move(s));
        }
    }
    doc.segments = std::move(kept);
    return removed;
}

}  // namespace mmweb

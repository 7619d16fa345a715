#include "mmweb/extract.hpp"

#include <algorithm>
#include <unordered_set>

#include "mmweb/simplify.hpp"
#include "mmweb/url.hpp"

namespace mmweb {

namespace {

class Linearizer {
public:
    explicit Linearizer(const std::string& base) : base_(base) {}

    void visit(const DomNode& node) {
        if (node.is_text()) {
            if (node.text == kEndOfDocumentToken) {
                boundary();
                paragraphs_.emplace_back(kEndOfDocumentToken);
                return;
            }
            line_ += node.text;
            return;
        }
        if (!node.is_element() && node.tag != "#document") return;
        if (node.tag == "img") {
            image(node);
            return;
        }
        boundary();
        for (const auto& c : node.children) visit(c);
        boundary();
    }

    std::vector<Segment> finish() {
        boundary();
        flush_text();
        return std::move(segments_);
    }

private:
    void boundary() {
        for (auto& p : text::paragraphs(line_)) paragraphs_.push_back(std::move(p));
        line_.clear();
    }

    void flush_text() {
        std::string body;
        for (const auto& p : paragraphs_) {
            if (!body.empty()) body.push_back('\n');
            body += p;
        }
        paragraphs_.clear();
        append_text(segments_, body);
    }

    void image(const DomNode& node) {
        // Lazy loaders put a data: placeholder in src and the real URL in data-src.
        const std::string* src = node.attr("src");
        if (!src || text::trim(*src).empty() || text::trim(*src).starts_with("data:")) {
            if (const std::string* lazy = node.attr("data-src")) src = lazy;
        }
        if (!src || text::trim(*src).empty()) return;
        std::string resolved = resolve_url(base_, *src);
        if (!is_absolute_http_url(resolved)) return;
        boundary();
        flush_text();
        ImageSegment seg;
        seg.src_url = std::move(resolved);
        if (const std::string* alt = node.attr("alt")) seg.alt = *alt;
        segments_.emplace_back(std::move(seg));
    }

    std::string base_;
    std::string line_;
    std::vector<std::string> paragraphs_;
    std::vector<Segment> segments_;
};

}  // namespace

MultimodalDocument extract_document(const DomTree& tree, const std::string& page_url, std::int64_t fetch_time,
                                    std::string id) {
    Linearizer lin(page_url);
    lin.visit(tree);
    MultimodalDocument doc;
    doc.id = std::move(id);
    doc.url = page_url;
    doc.fetch_time = fetch_time;
    doc.segments = lin.finish();
    if (doc.segments.empty()) throw Error("empty document");
    return doc;
}

std::vector<ManifestEntry> harvest_image_urls(std::span<const MultimodalDocument> docs) {
    std::vector<ManifestEntry> out;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& d : docs) {
        const std::string& ref = d.id.empty() ? d.url : d.id;
        for (const auto& u : d.image_urls()) {
            auto [it, inserted] = index.emplace(u, out.size());
            if (inserted) out.push_back(ManifestEntry{u, {}});
            auto& refs = out[it->second].referrers;
            if (refs.empty() || refs.back() != ref) {
                if (std::find(refs.begin(), refs.end(), ref) == refs.end()) refs.push_back(ref);
            }
        }
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> manifest) {
    std::vector<json> rows;
    for (const auto& e : manifest) rows.push_back({{"url", e.url}, {"referrers", e.referrers}});
    write_jsonl(path, rows);
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::vector<ManifestEntry> out;
    for_each_jsonl(path, [&](const json& j) {
        out.push_back({j.at("url").get<std::string>(), j.at("referrers").get<std::vector<std::string>>()});
    });
    return out;
}

FetchResult FetchResult::failure(std::string url) {
    FetchResult r;
    r.src_url = std::move(url);
    return r;
}

json to_json(const FetchResult& r) {
    json j = {{"url", r.src_url}, {"status", r.status == FetchStatus::ok ? "ok" : "failed"}};
    j["width"] = r.width ? json(*r.width) : json(nullptr);
    j["height"] = r.height ? json(*r.height) : json(nullptr);
    j["format"] = r.format ? json(std::string(to_string(*r.format))) : json(nullptr);
    return j;
}

FetchResult fetch_result_from_json(const json& j) {
    FetchResult r;
    r.src_url = j.at("url").get<std::string>();
    r.status = j.at("status").get<std::string>() == "ok" ? FetchStatus::ok : FetchStatus::failed;
    if (j.contains("width") && !j["width"].is_null()) r.width = j["width"].get<int>();
    if (j.contains("height") && !j["height"].is_null()) r.height = j["height"].get<int>();
    if (j.contains("format") && !j["format"].is_null()) r.format = image_format_from_string(j["format"].get<std::string>());
    if (r.status == FetchStatus::ok && !(r.width && r.height && r.format))
        throw Error("ok fetch result without full metadata: " + r.src_url);
    return r;
}

void write_fetch_results(const std::filesystem::path& path, std::span<const FetchResult> results) {
    std::vector<json> rows;
    for (const auto& r : results) rows.push_back(to_json(r));
    write_jsonl(path, rows);
}

std::vector<FetchResult> read_fetch_results(const std::filesystem::path& path) {
    std::vector<FetchResult> out;
    for_each_jsonl(path, [&](const json& j) { out.push_back(fetch_result_from_json(j)); });
    return out;
}

MultimodalDocument attach_images(MultimodalDocument doc, const FetchResults& results) {
    remove_images(doc, [&](const ImageSegment& img) {
        auto it = results.find(img.src_url);
        return it == results.end() || it->second.status != FetchStatus::ok;
    });
    for (auto& s : doc.segments) {
        if (auto* img = std::get_if<ImageSegment>(&s)) {
            const FetchResult& r = results.at(img->src_url);
            img->width = r.width;
            img->height = r.height;
            img->format = r.format;
        }
    }
    return doc;
}

}  // namespace mmweb

#include "mmweb/dedup.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mmweb/json_io.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

namespace {

void keep_latest(std::map<std::string, Recency>& m, const std::string& key, const Recency& r) {
    auto [it, inserted] = m.emplace(key, r);
    if (!inserted && it->second < r) it->second = r;
}

void keep_latest(std::map<std::uint64_t, Recency>& m, std::uint64_t key, const Recency& r) {
    auto [it, inserted] = m.emplace(key, r);
    if (!inserted && it->second < r) it->second = r;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("counters: bad number '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_i64(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("counters: bad number '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
        if (tab == std::string_view::npos) return out;
        pos = tab + 1;
    }
}

Recency recency(const MultimodalDocument& d) { return {d.fetch_time, d.id}; }

}  // namespace

void CorpusCounters::merge(const CorpusCounters& o) {
    for (const auto& [k, v] : o.image_urls) image_urls[k] += v;
    for (const auto& [k, v] : o.paragraphs) paragraphs[k] += v;
    for (const auto& [k, v] : o.latest_by_url) keep_latest(latest_by_url, k, v);
    for (const auto& [k, v] : o.latest_by_image_set) keep_latest(latest_by_image_set, k, v);
}

void CorpusCounters::save(const std::filesystem::path& path) const {
    std::ostringstream out;
    for (const auto& [k, v] : image_urls) out << "image\t" << k << '\t' << v << '\n';
    for (const auto& [k, v] : paragraphs) out << "para\t" << k.first << '\t' << k.second << '\t' << v << '\n';
    for (const auto& [k, v] : latest_by_url) out << "url\t" << k << '\t' << v.first << '\t' << v.second << '\n';
    for (const auto& [k, v] : latest_by_image_set)
        out << "imageset\t" << k << '\t' << v.first << '\t' << v.second << '\n';
    write_file_atomic(path, out.str());
}

CorpusCounters CorpusCounters::load(const std::filesystem::path& path) {
    CorpusCounters c;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_tabs(line);
        if (f[0] == "image" && f.size() == 3) {
            c.image_urls[std::string(f[1])] += parse_u64(f[2]);
        } else if (f[0] == "para" && f.size() == 4) {
            c.paragraphs[{std::string(f[1]), parse_u64(f[2])}] += parse_u64(f[3]);
        } else if (f[0] == "url" && f.size() == 4) {
            keep_latest(c.latest_by_url, std::string(f[1]), {parse_i64(f[2]), std::string(f[3])});
        } else if (f[0] == "imageset" && f.size() == 4) {
            keep_latest(c.latest_by_image_set, parse_u64(f[1]), {parse_i64(f[2]), std::string(f[3])});
        } else {
            throw Error("counters: malformed line in " + path.string());
        }
    }
    return c;
}

std::uint64_t paragraph_key(std::string_view paragraph) {
    return text::stable_hash(text::rtrim(text::nfc(paragraph)), 0x70617261ULL);
}

std::uint64_t image_set_key(const MultimodalDocument& doc) {
    auto urls = doc.image_urls();
    if (urls.empty()) return 0;
    std::sort(urls.begin(), urls.end());
    urls.erase(std::unique(urls.begin(), urls.end()), urls.end());
    std::string joined;
    for (const auto& u : urls) joined += u + '\n';
    const std::uint64_t h = text::stable_hash(joined, 0x696d6773ULL);
    return h == 0 ? 1 : h;
}

std::size_t dedup_images_within_document(MultimodalDocument& doc) {
    std::unordered_set<std::string> seen;
    return remove_images(doc, [&](const ImageSegment& img) { return !seen.insert(img.src_url).second; });
}

void count_image_urls(std::span<const MultimodalDocument> docs, CorpusCounters& c) {
    for (const auto& d : docs) {
        std::set<std::string> distinct;
        for (auto& u : d.image_urls()) distinct.insert(std::move(u));
        for (const auto& u : distinct) ++c.image_urls[u];
    }
}

void count_paragraphs(std::span<const MultimodalDocument> docs, CorpusCounters& c) {
    for (const auto& d : docs) {
        const std::string domain = d.domain();
        for (const auto& seg : d.segments) {
            if (const auto* t = std::get_if<TextSegment>(&seg)) {
                for (const auto& p : text::paragraphs(t->body)) ++c.paragraphs[{domain, paragraph_key(p)}];
            }
        }
    }
}

void count_latest_by_url(std::span<const MultimodalDocument> docs, CorpusCounters& c) {
    for (const auto& d : docs) keep_latest(c.latest_by_url, d.url, recency(d));
}

void count_latest_by_image_set(std::span<const MultimodalDocument> docs, CorpusCounters& c) {
    for (const auto& d : docs) {
        if (auto key = image_set_key(d)) keep_latest(c.latest_by_image_set, key, recency(d));
    }
}

std::size_t drop_overused_images(std::vector<MultimodalDocument>& docs, const CorpusCounters& c,
                                 std::uint64_t max_occurrences) {
    std::size_t removed = 0;
    for (auto& d : docs) {
        removed += dedup_images_within_document(d);
        removed += remove_images(d, [&](const ImageSegment& img) {
            auto it = c.image_urls.find(img.src_url);
            return it != c.image_urls.end() && it->second > max_occurrences;
        });
    }
    return removed;
}

bool survives_url_dedup(const MultimodalDocument& doc, const CorpusCounters& c) {
    auto it = c.latest_by_url.find(doc.url);
    return it == c.latest_by_url.end() || it->second == recency(doc);
}

bool survives_image_set_dedup(const MultimodalDocument& doc, const CorpusCounters& c) {
    const auto key = image_set_key(doc);
    if (key == 0) return true;
    auto it = c.latest_by_image_set.find(key);
    return it == c.latest_by_image_set.end() || it->second == recency(doc);
}

std::size_t remove_repeated_paragraphs(MultimodalDocument& doc, const CorpusCounters& c, std::uint64_t min_count) {
    const std::string domain = doc.domain();
    std::size_t removed = 0;
    for (auto& seg : doc.segments) {
        auto* t = std::get_if<TextSegment>(&seg);
        if (!t) continue;
        std::string kept;
        for (const auto& p : text::paragraphs(t->body)) {
            auto it = c.paragraphs.find({domain, paragraph_key(p)});
            if (it != c.paragraphs.end() && it->second >= min_count) {
                ++removed;
                continue;
            }
            if (!kept.empty()) kept += '\n';
            kept += p;
        }
        t->body = std::move(kept);
    }
    if (removed) doc.segments = normalize_segments(std::move(doc.segments));
    return removed;
}

std::vector<MultimodalDocument> dedup_documents_by_url(std::vector<MultimodalDocument> docs) {
    CorpusCounters c;
    count_latest_by_url(docs, c);
    std::erase_if(docs, [&](const MultimodalDocument& d) { return !survives_url_dedup(d, c); });
    return docs;
}

std::vector<MultimodalDocument> dedup_documents_by_image_set(std::vector<MultimodalDocument> docs) {
    CorpusCounters c;
    count_latest_by_image_set(docs, c);
    std::erase_if(docs, [&](const MultimodalDocument& d) { return !survives_image_set_dedup(d, c); });
    return docs;
}

std::vector<MultimodalDocument> dedup_paragraphs_by_domain(std::vector<MultimodalDocument> docs,
                                                           std::uint64_t min_count) {
    CorpusCounters c;
    count_paragraphs(docs, c);
    for (auto& d : docs) remove_repeated_paragraphs(d, c, min_count);
    std::erase_if(docs, [](const MultimodalDocument& d) { return text::trim(d.text()).empty(); });
    return docs;
}

std::vector<MultimodalDocument> dedup_images(std::vector<MultimodalDocument> docs, std::uint64_t max_occurrences) {
    CorpusCounters c;
    count_image_urls(docs, c);
    drop_overused_images(docs, c, max_occurrences);
    return docs;
}

}  // namespace mmweb

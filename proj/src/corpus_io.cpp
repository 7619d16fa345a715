#include "mmweb/corpus_io.hpp"

#include <charconv>
#include <zlib.h>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "mmweb/url.hpp"

namespace mmweb {

namespace fs = std::filesystem;

SourceFormat source_format_from_string(std::string_view tag) {
    if (tag == "warc") return SourceFormat::warc;
    if (tag == "html-dir") return SourceFormat::html_dir;
    if (tag == "jsonl") return SourceFormat::jsonl;
    throw Error("unsupported source format: " + std::string(tag));
}

std::string_view to_string(SourceFormat f) {
    switch (f) {
        case SourceFormat::warc: return "warc";
        case SourceFormat::html_dir: return "html-dir";
        case SourceFormat::jsonl: return "jsonl";
    }
    return "warc";
}

std::int64_t parse_iso8601(std::string_view s) {
    std::tm tm{};
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    std::string str(s);
    if (std::sscanf(str.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &sec) != 6)
        throw Error("bad timestamp: " + str);
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = sec;
    return static_cast<std::int64_t>(timegm(&tm));
}

std::string format_iso8601(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void PageStream::note_time(std::int64_t t) {
    if (last_time_ && t < *last_time_) {
        ++stats_.out_of_order;
        warn("fetch_time decreased within stream");
    }
    last_time_ = t;
}

void PageStream::warn(std::string msg) {
    if (stats_.warnings.size() < 100) stats_.warnings.push_back(std::move(msg));
}

namespace {

bool is_html_type(std::string_view content_type) {
    std::string ct = text::ascii_lower(content_type);
    return ct.find("text/html") != std::string::npos || ct.find("application/xhtml") != std::string::npos;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Buffered reader over a (possibly multi-member) gzip or plain file.
class GzReader {
public:
    explicit GzReader(const fs::path& path) : file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw Error("cannot open " + path.string());
        gzbuffer(file_, 1 << 17);
    }
    ~GzReader() { gzclose(file_); }
    GzReader(const GzReader&) = delete;
    GzReader& operator=(const GzReader&) = delete;

    bool read_line(std::string& line) {
        line.clear();
        while (true) {
            auto nl = buf_.find('\n', pos_);
            if (nl != std::string::npos) {
                line.assign(buf_, pos_, nl - pos_);
                pos_ = nl + 1;
                return true;
            }
            if (!fill()) {
                if (pos_ < buf_.size()) {
                    line.assign(buf_, pos_);
                    pos_ = buf_.size();
                    return true;
                }
                return false;
            }
        }
    }

    bool read_exact(std::size_t n, std::string& out) {
        while (buf_.size() - pos_ < n) {
            if (!fill()) return false;
        }
        out.assign(buf_, pos_, n);
        pos_ += n;
        return true;
    }

private:
    bool fill() {
        if (pos_ > 0) {
            buf_.erase(0, pos_);
            pos_ = 0;
        }
        char chunk[1 << 16];
        int n = gzread(file_, chunk, sizeof chunk);
        if (n < 0) {
            int err = 0;
            throw Error(std::string("gzip read error: ") + gzerror(file_, &err));
        }
        if (n == 0) return false;
        buf_.append(chunk, static_cast<std::size_t>(n));
        return true;
    }

    gzFile file_;
    std::string buf_;
    std::size_t pos_ = 0;
};

class WarcStream final : public PageStream {
public:
    explicit WarcStream(const fs::path& path) : reader_(path) {}

    std::optional<PageRecord> next() override {
        while (true) {
            auto headers = next_header_block();
            if (!headers) return std::nullopt;
            auto len_it = headers->find("content-length");
            if (len_it == headers->end()) {
                ++stats_.malformed;
                warn("WARC record without Content-Length");
                resync_ = true;
                continue;
            }
            std::size_t length = 0;
            try {
                length = std::stoull(len_it->second);
            } catch (...) {
                ++stats_.malformed;
                warn("bad Content-Length");
                resync_ = true;
                continue;
            }
            std::string block;
            if (!reader_.read_exact(length, block)) {
                ++stats_.malformed;
                warn("truncated WARC record");
                return std::nullopt;
            }
            const std::string type = text::ascii_lower((*headers)["warc-type"]);
            if (type != "response") {
                ++stats_.skipped_non_response;
                continue;
            }
            auto page = parse_response(*headers, block);
            if (page) return page;
        }
    }

private:
    std::optional<std::map<std::string, std::string>> next_header_block() {
        std::string line;
        // Skip separators, or garbage up to the next record after a malformed one.
        while (true) {
            if (!reader_.read_line(line)) return std::nullopt;
            std::string_view l = strip_cr(line);
            if (l.starts_with("WARC/")) break;
            if (!l.empty() && !resync_) {
                ++stats_.malformed;
                warn("expected WARC version line");
                resync_ = true;
            }
        }
        resync_ = false;
        std::map<std::string, std::string> headers;
        while (reader_.read_line(line)) {
            std::string_view l = strip_cr(line);
            if (l.empty()) break;
            auto colon = l.find(':');
            if (colon == std::string_view::npos) continue;
            headers[text::ascii_lower(l.substr(0, colon))] = std::string(text::trim(l.substr(colon + 1)));
        }
        return headers;
    }

    std::optional<PageRecord> parse_response(std::map<std::string, std::string>& headers, const std::string& block) {
        std::size_t sep = block.find("\r\n\r\n");
        std::size_t body_start = sep == std::string::npos ? std::string::npos : sep + 4;
        if (sep == std::string::npos) {
            sep = block.find("\n\n");
            if (sep != std::string::npos) body_start = sep + 2;
        }
        if (sep == std::string::npos || !block.starts_with("HTTP/")) {
            ++stats_.malformed;
            warn("response record without HTTP header");
            return std::nullopt;
        }
        std::string content_type;
        std::istringstream hs(block.substr(0, sep));
        std::string hl;
        std::getline(hs, hl);  // status line
        while (std::getline(hs, hl)) {
            std::string_view v = strip_cr(hl);
            auto colon = v.find(':');
            if (colon == std::string_view::npos) continue;
            if (text::ascii_lower(v.substr(0, colon)) == "content-type")
                content_type = std::string(text::trim(v.substr(colon + 1)));
        }
        if (!is_html_type(content_type)) {
            ++stats_.skipped_non_html;
            return std::nullopt;
        }
        PageRecord page;
        page.url = headers["warc-target-uri"];
        if (page.url.starts_with('<') && page.url.ends_with('>')) page.url = page.url.substr(1, page.url.size() - 2);
        if (!is_absolute_http_url(page.url)) {
            ++stats_.malformed;
            warn("response record with non-http target URI: " + page.url);
            return std::nullopt;
        }
        try {
            page.fetch_time = parse_iso8601(headers["warc-date"]);
        } catch (const Error& e) {
            ++stats_.malformed;
            warn(e.what());
            return std::nullopt;
        }
        page.content_type = content_type;
        page.raw_html = block.substr(body_start);
        note_time(page.fetch_time);
        ++stats_.yielded;
        return page;
    }

    GzReader reader_;
    bool resync_ = false;
};

class HtmlDirStream final : public PageStream {
public:
    explicit HtmlDirStream(const fs::path& dir) {
        if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
        const fs::path sidecar = dir / "metadata.tsv";
        if (!fs::exists(sidecar)) throw Error("missing sidecar metadata table: " + sidecar.string());
        std::ifstream in(sidecar);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string name, url, time;
            if (!std::getline(ls, name, '\t') || !std::getline(ls, url, '\t') || !std::getline(ls, time, '\t'))
                continue;
            meta_[name] = {url, std::string(text::trim(time))};
        }
        for (const auto& entry : fs::directory_iterator(dir)) {
            const auto ext = text::ascii_lower(entry.path().extension().string());
            if (entry.is_regular_file() && (ext == ".html" || ext == ".htm")) files_.push_back(entry.path());
        }
        std::sort(files_.begin(), files_.end());
    }

    std::optional<PageRecord> next() override {
        while (index_ < files_.size()) {
            const fs::path& file = files_[index_++];
            auto it = meta_.find(file.filename().string());
            if (it == meta_.end()) {
                ++stats_.malformed;
                warn("no sidecar entry for " + file.filename().string());
                continue;
            }
            PageRecord page;
            page.url = it->second.first;
            const std::string& when = it->second.second;
            std::int64_t epoch = 0;
            const auto [end, ec] = std::from_chars(when.data(), when.data() + when.size(), epoch);
            if (ec == std::errc{} && end == when.data() + when.size()) {
                page.fetch_time = epoch;
            } else {
                try {
                    page.fetch_time = parse_iso8601(when);
                } catch (const Error&) {
                    ++stats_.malformed;
                    warn("bad fetch_time for " + file.filename().string());
                    continue;
                }
            }
            if (!is_absolute_http_url(page.url)) {
                ++stats_.malformed;
                warn("bad url for " + file.filename().string());
                continue;
            }
            page.raw_html = read_file(file);
            note_time(page.fetch_time);
            ++stats_.yielded;
            return page;
        }
        return std::nullopt;
    }

private:
    std::map<std::string, std::pair<std::string, std::string>> meta_;
    std::vector<fs::path> files_;
    std::size_t index_ = 0;
};

class JsonlPageStream final : public PageStream {
public:
    explicit JsonlPageStream(const fs::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw Error("cannot open " + path.string());
    }

    std::optional<PageRecord> next() override {
        std::string line;
        while (std::getline(in_, line)) {
            if (line.empty()) continue;
            try {
                PageRecord page = page_from_json(json::parse(line));
                if (!is_html_type(page.content_type)) {
                    ++stats_.skipped_non_html;
                    continue;
                }
                if (!is_absolute_http_url(page.url)) throw Error("bad url");
                note_time(page.fetch_time);
                ++stats_.yielded;
                return page;
            } catch (const std::exception& e) {
                ++stats_.malformed;
                warn(e.what());
            }
        }
        return std::nullopt;
    }

private:
    std::ifstream in_;
};

std::string gzip_member(std::string_view data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error("deflateInit2 failed");
    std::string out(deflateBound(&zs, data.size()) + 32, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error("gzip compression failed");
    out.resize(zs.total_out);
    return out;
}

}  // namespace

std::unique_ptr<PageStream> open_page_stream(const fs::path& source, SourceFormat format) {
    if (!fs::exists(source)) throw Error("input does not exist: " + source.string());
    switch (format) {
        case SourceFormat::warc: return std::make_unique<WarcStream>(source);
        case SourceFormat::html_dir: return std::make_unique<HtmlDirStream>(source);
        case SourceFormat::jsonl: return std::make_unique<JsonlPageStream>(source);
    }
    throw Error("unsupported source format");
}

std::vector<PageRecord> read_pages(const fs::path& source, SourceFormat format, ReadStats* stats) {
    auto stream = open_page_stream(source, format);
    std::vector<PageRecord> pages;
    while (auto p = stream->next()) pages.push_back(std::move(*p));
    if (stats) *stats = stream->stats();
    return pages;
}

void write_warc(const fs::path& path, std::span<const PageRecord> pages, bool gzip) {
    std::string out;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        const auto& p = pages[i];
        std::string block = "HTTP/1.1 200 OK\r\nContent-Type: " + p.content_type +
                            "\r\nContent-Length: " + std::to_string(p.raw_html.size()) + "\r\n\r\n" + p.raw_html;
        std::string record = "WARC/1.0\r\nWARC-Type: response\r\nWARC-Target-URI: " + p.url +
                             "\r\nWARC-Date: " + format_iso8601(p.fetch_time) +
                             "\r\nWARC-Record-ID: <urn:mmweb:" + std::to_string(i) +
                             ">\r\nContent-Type: application/http; msgtype=response\r\nContent-Length: " +
                             std::to_string(block.size()) + "\r\n\r\n" + block + "\r\n\r\n";
        out += gzip ? gzip_member(record) : record;
    }
    write_file_atomic(path, out);
}

json to_json(const PageRecord& page) {
    return {{"url", page.url},
            {"fetch_time", page.fetch_time},
            {"content_type", page.content_type},
            {"html", text::decode_utf8_lossy(page.raw_html)}};
}

PageRecord page_from_json(const json& j) {
    PageRecord p;
    p.url = j.at("url").get<std::string>();
    p.fetch_time = j.at("fetch_time").get<std::int64_t>();
    p.raw_html = j.at("html").get<std::string>();
    if (j.contains("content_type")) p.content_type = j.at("content_type").get<std::string>();
    return p;
}

void write_pages_jsonl(const fs::path& path, std::span<const PageRecord> pages) {
    std::vector<json> rows;
    rows.reserve(pages.size());
    for (const auto& p : pages) rows.push_back(to_json(p));
    write_jsonl(path, rows);
}

CorpusManifest CorpusManifest::open(std::vector<fs::path> shards, SourceFormat format) {
    for (const auto& s : shards) {
        if (!fs::exists(s)) throw Error("manifest shard does not exist: " + s.string());
    }
    CorpusManifest m;
    m.shards = std::move(shards);
    m.format = format;
    return m;
}

void CorpusManifest::count_records() {
    record_counts.clear();
    for (const auto& s : shards) {
        ReadStats stats;
        read_pages(s, format, &stats);
        record_counts.push_back(stats.yielded);
    }
}

std::size_t write_documents(std::span<const MultimodalDocument> docs, const fs::path& path) {
    std::vector<json> rows;
    rows.reserve(docs.size());
    for (const auto& d : docs) {
        validate(d);
        rows.push_back(to_json(d));
    }
    write_jsonl(path, rows);
    return rows.size();
}

std::vector<MultimodalDocument> read_documents(const fs::path& path) {
    std::vector<MultimodalDocument> docs;
    for_each_jsonl(path, [&](const json& j) { docs.push_back(document_from_json(j)); });
    return docs;
}

ParallelArrays export_parallel_arrays(const MultimodalDocument& doc) {
    validate(doc);
    ParallelArrays out;
    out.url = doc.url;
    out.fetch_time = doc.fetch_time;
    for (const auto& s : doc.segments) {
        if (const auto* t = std::get_if<TextSegment>(&s)) {
            out.texts.emplace_back(t->body);
            out.images.emplace_back(std::nullopt);
            out.image_metadata.emplace_back(std::nullopt);
        } else {
            const auto& img = std::get<ImageSegment>(s);
            out.texts.emplace_back(std::nullopt);
            out.images.emplace_back(img.src_url);
            out.image_metadata.emplace_back(img);
        }
    }
    return out;
}

MultimodalDocument import_parallel_arrays(const ParallelArrays& a) {
    if (a.texts.size() != a.images.size()) throw Error("parallel arrays differ in length");
    MultimodalDocument doc;
    doc.url = a.url;
    doc.fetch_time = a.fetch_time;
    for (std::size_t i = 0; i < a.texts.size(); ++i) {
        if (a.texts[i].has_value() == a.images[i].has_value())
            throw Error("parallel arrays: exactly one of texts[i], images[i] must be set");
        if (a.texts[i]) {
            doc.segments.emplace_back(TextSegment{*a.texts[i]});
        } else if (i < a.image_metadata.size() && a.image_metadata[i]) {
            doc.segments.emplace_back(*a.image_metadata[i]);
        } else {
            doc.segments.emplace_back(ImageSegment{*a.images[i], {}, {}, {}, {}});
        }
    }
    return doc;
}

json to_json(const ParallelArrays& a) {
    json texts = json::array();
    json images = json::array();
    json meta = json::array();
    for (std::size_t i = 0; i < a.texts.size(); ++i) {
        texts.push_back(a.texts[i] ? json(*a.texts[i]) : json(nullptr));
        images.push_back(a.images[i] ? json(*a.images[i]) : json(nullptr));
        if (i < a.image_metadata.size() && a.image_metadata[i]) {
            const auto& img = *a.image_metadata[i];
            json m = json::object();
            if (img.width) m["width"] = *img.width;
            if (img.height) m["height"] = *img.height;
            if (img.format) m["format"] = std::string(to_string(*img.format));
            meta.push_back(std::move(m));
        } else {
            meta.push_back(nullptr);
        }
    }
    return {{"url", a.url}, {"fetch_time", a.fetch_time}, {"texts", texts}, {"images", images}, {"metadata", meta}};
}

}  // namespace mmweb

#include "mmweb/json_io.hpp"

#include <fstream>
#include <sstream>

namespace mmweb {

json to_json(const MultimodalDocument& doc) {
    json segments = json::array();
    for (const auto& s : doc.segments) {
        if (const auto* t = std::get_if<TextSegment>(&s)) {
            segments.push_back({{"kind", "text"}, {"body", t->body}});
        } else {
            const auto& img = std::get<ImageSegment>(s);
            json j = {{"kind", "image"}, {"url", img.src_url}};
            if (img.width) j["width"] = *img.width;
            if (img.height) j["height"] = *img.height;
            if (img.format) j["format"] = std::string(to_string(*img.format));
            if (img.alt) j["alt"] = *img.alt;
            segments.push_back(std::move(j));
        }
    }
    json out = {{"url", doc.url}, {"fetch_time", doc.fetch_time}, {"segments", std::move(segments)}};
    if (!doc.id.empty()) out["id"] = doc.id;
    return out;
}

MultimodalDocument document_from_json(const json& j) {
    try {
        MultimodalDocument doc;
        doc.url = j.at("url").get<std::string>();
        doc.fetch_time = j.at("fetch_time").get<std::int64_t>();
        if (j.contains("id")) doc.id = j.at("id").get<std::string>();
        for (const auto& s : j.at("segments")) {
            const auto kind = s.at("kind").get<std::string>();
            if (kind == "text") {
                doc.segments.emplace_back(TextSegment{s.at("body").get<std::string>()});
            } else if (kind == "image") {
                ImageSegment img;
                img.src_url = s.at("url").get<std::string>();
                if (s.contains("width")) img.width = s.at("width").get<int>();
                if (s.contains("height")) img.height = s.at("height").get<int>();
                if (s.contains("format")) img.format = image_format_from_string(s.at("format").get<std::string>());
                if (s.contains("alt")) img.alt = s.at("alt").get<std::string>();
                doc.segments.emplace_back(std::move(img));
            } else {
                throw Error("unknown segment kind: " + kind);
            }
        }
        return doc;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed document record: ") + e.what());
    }
}

void for_each_jsonl(const std::filesystem::path& path, const std::function<void(const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        fn(j);
    }
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::vector<json> rows;
    for_each_jsonl(path, [&](const json& j) { rows.push_back(j); });
    return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows) {
    std::string buf;
    for (const auto& r : rows) {
        buf += r.dump(-1, ' ', false, json::error_handler_t::replace);
        buf.push_back('\n');
    }
    write_file_atomic(path, buf);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mmweb

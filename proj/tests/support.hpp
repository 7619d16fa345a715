#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mmweb/document.hpp"

namespace testing {

inline std::filesystem::path data_dir() {
    return MMWEB_TEST_DATA_DIR;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "mmweb") {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline mmweb::TextSegment text(std::string body) {
    return mmweb::TextSegment{std::move(body)};
}

inline mmweb::ImageSegment image(std::string url, int w = 800, int h = 600,
                                 mmweb::ImageFormat f = mmweb::ImageFormat::jpg) {
    mmweb::ImageSegment s;
    s.src_url = std::move(url);
    s.width = w;
    s.height = h;
    s.format = f;
    return s;
}

inline mmweb::MultimodalDocument doc(std::string id, std::string url, std::int64_t t,
                                     std::vector<mmweb::Segment> segments) {
    mmweb::MultimodalDocument d;
    d.id = std::move(id);
    d.url = std::move(url);
    d.fetch_time = t;
    d.segments = std::move(segments);
    return d;
}

/// Space-joined words drawn uniformly from a vocabulary of `vocab` synthetic words.
inline std::string random_words(std::mt19937_64& rng, std::size_t n, std::size_t vocab = 1000) {
    std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += "w" + std::to_string(pick(rng));
    }
    return out;
}

}  // namespace testing

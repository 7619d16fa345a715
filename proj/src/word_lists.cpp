#include "mmweb/word_lists.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "mmweb/json_io.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

WordSet parse_word_list(std::string_view content) {
    WordSet out;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string_view::npos) nl = content.size();
        auto line = text::trim(content.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty() || line.front() == '#') continue;
        out.insert(text::lower(line));
    }
    return out;
}

WordSet load_word_list(const std::filesystem::path& path) {
    return parse_word_list(read_file(path));
}

void save_word_list(const std::filesystem::path& path, const WordSet& words) {
    std::vector<std::string> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& w : sorted) out += w + "\n";
    write_file_atomic(path, out);
}

WordLists WordLists::load_dir(const std::filesystem::path& dir) {
    return {load_word_list(dir / "stop.txt"), load_word_list(dir / "flagged.txt"), load_word_list(dir / "spam.txt"),
            load_word_list(dir / "common.txt")};
}

WordSet build_common_words(std::span<const std::string> texts) {
    std::unordered_map<std::string, int> counts;
    for (const auto& t : texts) {
        for (const auto& tok : text::tokens(t)) {
            auto w = text::normalize_word(tok);
            if (!w.empty()) ++counts[w];
        }
    }
    WordSet out;
    for (auto& [w, c] : counts) {
        if (c >= 2) out.insert(w);
    }
    return out;
}

}  // namespace mmweb

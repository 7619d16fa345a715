#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>

namespace mmweb {

using WordSet = std::unordered_set<std::string>;

/// One entry per line; blank lines and lines starting with '#' are ignored.
/// Entries are trimmed, NFC-normalized and lowercased.
WordSet parse_word_list(std::string_view content);
WordSet load_word_list(const std::filesystem::path& path);
void save_word_list(const std::filesystem::path& path, const WordSet& words);

struct WordLists {
    WordSet stop;
    WordSet flagged;
    WordSet spam;
    WordSet common;

    /// Reads stop.txt, flagged.txt, spam.txt and common.txt from `dir`.
    static WordLists load_dir(const std::filesystem::path& dir);
};

/// Words (normalized as for list lookups) occurring at least twice across
/// all of `texts`.
WordSet build_common_words(std::span<const std::string> texts);

}  // namespace mmweb

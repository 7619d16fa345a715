#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmweb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace text {

/// Decodes arbitrary bytes as UTF-8, replacing invalid sequences with U+FFFD.
std::string decode_utf8_lossy(std::string_view bytes);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

std::string nfc(std::string_view utf8);
/// NFC + per-code-point lowercase.
std::string lower(std::string_view utf8);

bool is_space(char32_t cp);
bool is_alnum(char32_t cp);
bool is_punct(char32_t cp);

std::string_view trim(std::string_view utf8);
std::string_view rtrim(std::string_view utf8);

/// Splits on runs of Unicode whitespace after NFC normalization.
std::vector<std::string> tokens(std::string_view utf8);

/// Lowercased token with leading/trailing punctuation stripped. Used for every
/// word-list lookup (stop, flagged, spam, common words).
std::string normalize_word(std::string_view token);

/// Splits on one or more '\n', trimming each piece and dropping empty ones.
std::vector<std::string> paragraphs(std::string_view utf8);

bool contains_icase(std::string_view haystack, std::string_view needle);
std::string ascii_lower(std::string_view s);

// Stable hashing: FNV-1a over the bytes, finalized with a seeded splitmix64 mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = 0) {
    return mix64(fnv1a(bytes) ^ mix64(seed));
}

}  // namespace text
}  // namespace mmweb

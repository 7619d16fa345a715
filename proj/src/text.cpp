#include "mmweb/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>

namespace mmweb::text {

namespace {

// Returns the code point at s[i] and advances i; invalid bytes decode to U+FFFD.
char32_t next_cp(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return 0xFFFD;
    }
    i += len;
    return cp;
}

}  // namespace

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string decode_utf8_lossy(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto b = static_cast<unsigned char>(bytes[i]);
        if (b < 0x80) {
            out.push_back(static_cast<char>(b));
            ++i;
            continue;
        }
        append_utf8(out, next_cp(bytes, i));
    }
    return out;
}

std::u32string to_u32(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) out.push_back(next_cp(utf8, i));
    return out;
}

std::string to_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::string nfc(std::string_view utf8) {
    bool ascii = std::all_of(utf8.begin(), utf8.end(),
                             [](char c) { return static_cast<unsigned char>(c) < 0x80; });
    if (ascii) return std::string(utf8);
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
    icu::UnicodeString src = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    icu::UnicodeString dst = norm->normalize(src, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    std::string out;
    dst.toUTF8String(out);
    return out;
}

std::string lower(std::string_view utf8) {
    std::string normalized = nfc(utf8);
    std::string out;
    out.reserve(normalized.size());
    std::size_t i = 0;
    while (i < normalized.size()) {
        append_utf8(out, static_cast<char32_t>(u_tolower(static_cast<UChar32>(next_cp(normalized, i)))));
    }
    return out;
}

bool is_space(char32_t cp) {
    return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_alnum(char32_t cp) {
    return u_isalnum(static_cast<UChar32>(cp)) != 0;
}

bool is_punct(char32_t cp) {
    return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

std::string_view trim(std::string_view utf8) {
    utf8 = rtrim(utf8);
    std::size_t i = 0;
    while (i < utf8.size()) {
        std::size_t j = i;
        if (!is_space(next_cp(utf8, j))) break;
        i = j;
    }
    return utf8.substr(i);
}

std::string_view rtrim(std::string_view utf8) {
    // Scan forward remembering the end of the last non-space code point.
    std::size_t end = 0;
    std::size_t i = 0;
    while (i < utf8.size()) {
        char32_t cp = next_cp(utf8, i);
        if (!is_space(cp)) end = i;
    }
    return utf8.substr(0, end);
}

std::vector<std::string> tokens(std::string_view utf8) {
    const std::string normalized = nfc(utf8);
    std::vector<std::string> out;
    std::string current;
    std::size_t i = 0;
    while (i < normalized.size()) {
        const std::size_t start = i;
        char32_t cp = next_cp(normalized, i);
        if (is_space(cp)) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current.append(normalized, start, i - start);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

std::string normalize_word(std::string_view token) {
    std::u32string cps = to_u32(lower(token));
    std::size_t b = 0;
    std::size_t e = cps.size();
    while (b < e && is_punct(cps[b])) ++b;
    while (e > b && is_punct(cps[e - 1])) --e;
    return to_utf8(std::u32string_view(cps).substr(b, e - b));
}

std::vector<std::string> paragraphs(std::string_view utf8) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= utf8.size()) {
        std::size_t nl = utf8.find('\n', pos);
        if (nl == std::string_view::npos) nl = utf8.size();
        std::string_view piece = trim(utf8.substr(pos, nl - pos));
        if (!piece.empty()) out.emplace_back(piece);
        pos = nl + 1;
    }
    return out;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool contains_icase(std::string_view haystack, std::string_view needle) {
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

}  // namespace mmweb::text

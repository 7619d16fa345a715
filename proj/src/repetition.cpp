#include "mmweb/repetition.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmweb/text.hpp"

namespace mmweb {

namespace {

std::size_t cp_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
}

std::string join(const std::vector<std::string>& toks, std::size_t start, std::size_t n) {
    std::string s = toks[start];
    for (std::size_t k = 1; k < n; ++k) s += ' ' + toks[start + k];
    return s;
}

}  // namespace

RepetitionStats repetition_stats(std::string_view raw) {
    RepetitionStats st;
    const std::string normalized = text::nfc(raw);

    const auto lines = text::paragraphs(normalized);
    if (!lines.empty()) {
        std::unordered_set<std::string> seen;
        std::size_t dup = 0, dup_chars = 0, chars = 0;
        for (const auto& line : lines) {
            const std::size_t len = cp_length(line);
            chars += len;
            if (!seen.insert(line).second) {
                ++dup;
                dup_chars += len;
            }
        }
        st.duplicate_line_fraction = static_cast<double>(dup) / static_cast<double>(lines.size());
        if (chars) st.duplicate_line_char_fraction = static_cast<double>(dup_chars) / static_cast<double>(chars);
    }

    const auto toks = text::tokens(normalized);
    std::vector<std::size_t> lens(toks.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) total += lens[i] = cp_length(toks[i]);
    if (total == 0) return st;

    for (std::size_t n = 2; n <= 4; ++n) {
        if (toks.size() < n) break;
        std::map<std::string, std::size_t> counts;  // ordered so ties resolve deterministically
        std::map<std::string, std::size_t> gram_chars;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
            auto g = join(toks, i, n);
            if (++counts[g] == 1) {
                std::size_t c = 0;
                for (std::size_t k = 0; k < n; ++k) c += lens[i + k];
                gram_chars[g] = c;
            }
        }
        std::size_t best = 0;
        for (const auto& [g, c] : counts) {
            if (c >= 2) best = std::max(best, c * gram_chars[g]);
        }
        st.top_ngram_char_fraction[n - 2] = std::min(1.0, static_cast<double>(best) / static_cast<double>(total));
    }

    for (std::size_t n = 5; n <= 10; ++n) {
        if (toks.size() < n) break;
        std::unordered_map<std::string, std::vector<std::size_t>> starts;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) starts[join(toks, i, n)].push_back(i);
        std::vector<bool> covered(toks.size(), false);
        for (const auto& [g, pos] : starts) {
            if (pos.size() < 2) continue;
            for (std::size_t p : pos) {
                for (std::size_t k = 0; k < n; ++k) covered[p + k] = true;
            }
        }
        std::size_t c = 0;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (covered[i]) c += lens[i];
        }
        st.duplicate_ngram_char_fraction[n - 5] = static_cast<double>(c) / static_cast<double>(total);
    }
    return st;
}

FilterVerdict repetition_gate(const RepetitionStats& s, const RepetitionThresholds& t) {
    FilterVerdict v;
    auto check = [&v](std::string code, double observed, double cutoff) {
        if (observed > cutoff) v.reasons.push_back({std::move(code), observed, cutoff});
    };
    check("DuplicateLines", s.duplicate_line_fraction, t.duplicate_line_fraction);
    check("DuplicateLineChars", s.duplicate_line_char_fraction, t.duplicate_line_char_fraction);
    for (std::size_t i = 0; i < 3; ++i)
        check("TopNgram" + std::to_string(i + 2), s.top_ngram_char_fraction[i], t.top_ngram_char_fraction[i]);
    for (std::size_t i = 0; i < 6; ++i)
        check("DuplicateNgram" + std::to_string(i + 5), s.duplicate_ngram_char_fraction[i],
              t.duplicate_ngram_char_fraction[i]);
    return v;
}

}  // namespace mmweb

#pragma once

#include <array>
#include <string_view>

#include "mmweb/filters.hpp"

namespace mmweb {

/// Document-level repetition statistics. Lines are the non-empty trimmed
/// '\n'-separated pieces; n-grams are over whitespace tokens and character
/// counts are code points of the tokens involved.
struct RepetitionStats {
    double duplicate_line_fraction = 0;
    double duplicate_line_char_fraction = 0;
    std::array<double, 3> top_ngram_char_fraction{};        // n = 2, 3, 4
    std::array<double, 6> duplicate_ngram_char_fraction{};  // n = 5..10
};

struct RepetitionThresholds {
    double duplicate_line_fraction = 0.30;
    double duplicate_line_char_fraction = 0.20;
    std::array<double, 3> top_ngram_char_fraction{0.20, 0.18, 0.16};
    std::array<double, 6> duplicate_ngram_char_fraction{0.15, 0.14, 0.13, 0.12, 0.11, 0.10};
    bool operator==(const RepetitionThresholds&) const = default;
};

/// A top n-gram seen only once contributes 0: it is not a repetition.
RepetitionStats repetition_stats(std::string_view text);

/// Rejects when any statistic is strictly above its threshold.
FilterVerdict repetition_gate(const RepetitionStats& stats, const RepetitionThresholds& thresholds = {});

}  // namespace mmweb

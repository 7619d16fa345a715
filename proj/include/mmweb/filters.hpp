#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mmweb/document.hpp"
#include "mmweb/language_id.hpp"
#include "mmweb/ngram_lm.hpp"
#include "mmweb/word_lists.hpp"

namespace mmweb {

/// Cutoffs for one profile. min_* reject values strictly below the cutoff,
/// max_* reject values strictly above it.
struct TextCutoffs {
    double min_words = 0;
    double max_words = 0;
    double max_char_repetition_ratio = 0;
    double max_word_repetition_ratio = 0;
    double max_special_char_ratio = 0;
    double min_stop_word_ratio = 0;
    double max_flagged_word_ratio = 0;
    double min_punctuation_ratio = 0;
    double max_spam_word_ratio = 0;
    double min_common_word_ratio = 0;
    double min_lang_id_score = 0;
    double max_perplexity = 0;

    static TextCutoffs paragraph_defaults();
    static TextCutoffs document_defaults();
    bool operator==(const TextCutoffs&) const = default;
};

struct TextFilterParams {
    TextCutoffs paragraph = TextCutoffs::paragraph_defaults();
    TextCutoffs document = TextCutoffs::document_defaults();
    int char_ngram = 10;  // window for char_repetition_ratio
    int word_ngram = 5;   // window for word_repetition_ratio
    std::string language = "en";
    bool operator==(const TextFilterParams&) const = default;
};

struct ImageFilterParams {
    std::set<ImageFormat> formats{ImageFormat::jpg, ImageFormat::png, ImageFormat::webp};
    int min_side = 150;
    int max_side = 20000;
    double min_aspect = 0.5;
    double max_aspect = 2.0;
    std::vector<std::string> banned_substrings{"logo", "button", "icon", "plugin", "widget"};
    std::size_t min_images_per_doc = 1;
    std::size_t max_images_per_doc = 30;

    /// Throws Error unless min_side < max_side and min_aspect = 1/max_aspect.
    void validate() const;
    bool operator==(const ImageFilterParams&) const = default;
};

struct TextMetrics {
    double word_count = 0;
    double char_repetition_ratio = 0;
    double word_repetition_ratio = 0;
    double special_char_ratio = 0;
    double stop_word_ratio = 0;
    double flagged_word_ratio = 0;
    double punctuation_ratio = 0;
    double spam_word_ratio = 0;
    double common_word_ratio = 0;
    std::optional<double> lang_id_score;  // absent without a language model
    std::optional<double> perplexity;     // absent without an n-gram model
};

/// Models used by the text filters. Either may be null, in which case the
/// corresponding metric is not computed and its cutoff not applied.
struct FilterModels {
    const LanguageIdentifier* language = nullptr;
    const NGramLM* lm = nullptr;
};

struct FilterReason {
    std::string code;
    double observed = 0;
    double cutoff = 0;
    bool operator==(const FilterReason&) const = default;
};

struct FilterVerdict {
    std::vector<FilterReason> reasons;
    bool accepted() const { return reasons.empty(); }
};

/// Fraction of n-grams equal to some earlier n-gram; 0 when there are none.
template <typename T>
double repetition_ratio(const std::vector<T>& items, std::size_t n);

/// Throws Error on whitespace-only text.
TextMetrics text_metrics(std::string_view text, const WordLists& lists, const FilterModels& models,
                         const TextFilterParams& params = {});
FilterVerdict check_cutoffs(const TextMetrics& m, const TextCutoffs& cutoffs);

FilterVerdict filter_paragraph(std::string_view text, const TextFilterParams& params, const WordLists& lists,
                               const FilterModels& models);
/// Throws Error when the segment has no metadata attached.
FilterVerdict filter_image(const ImageSegment& seg, const ImageFilterParams& params);

struct NodeFilterResult {
    MultimodalDocument document;
    std::size_t paragraphs_removed = 0;
    std::size_t images_removed = 0;
    std::map<std::string, std::size_t> reasons;  // code -> count
};

/// Drops rejected paragraphs and images. Text around a removed image merges.
/// The end-of-document sentinel paragraph is always kept.
NodeFilterResult filter_nodes(MultimodalDocument doc, const TextFilterParams& text_params,
                              const ImageFilterParams& image_params, const WordLists& lists,
                              const FilterModels& models);

/// Document-profile cutoffs on the joined text plus the image-count bounds.
FilterVerdict filter_document_level(const MultimodalDocument& doc, const TextFilterParams& text_params,
                                    const ImageFilterParams& image_params, const WordLists& lists,
                                    const FilterModels& models);

struct DocumentFilterResult {
    FilterVerdict verdict;
    NodeFilterResult nodes;
};

/// filter_nodes followed by filter_document_level on the surviving content.
DocumentFilterResult filter_document(MultimodalDocument doc, const TextFilterParams& text_params,
                                     const ImageFilterParams& image_params, const WordLists& lists,
                                     const FilterModels& models);

}  // namespace mmweb

#include "mmweb/filters.hpp"

#include <cmath>
#include <unordered_set>

#include "mmweb/simplify.hpp"

namespace mmweb {

TextCutoffs TextCutoffs::paragraph_defaults() {
    return {4, 1000, 0.1, 0.1, 0.3, 0.3, 0.01, 0.001, 0.12, 0.8, 0.8, 1500};
}

TextCutoffs TextCutoffs::document_defaults() {
    return {10, 2000, 0.1, 0.2, 0.275, 0.35, 0.01, 0.03, 0.12, 0.9, 0.8, 1500};
}

void ImageFilterParams::validate() const {
    if (!(min_side < max_side)) throw Error("image filter: min_side must be below max_side");
    if (!(max_aspect > 0) || std::abs(min_aspect * max_aspect - 1.0) > 1e-12)
        throw Error("image filter: min_aspect must equal 1/max_aspect");
    if (min_images_per_doc > max_images_per_doc) throw Error("image filter: min_images_per_doc > max_images_per_doc");
}

template <typename T>
double repetition_ratio(const std::vector<T>& items, std::size_t n) {
    if (n == 0 || items.size() < n) return 0.0;
    const std::size_t windows = items.size() - n + 1;
    std::unordered_set<T> seen;
    std::size_t dup = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        T gram{};
        for (std::size_t k = 0; k < n; ++k) {
            if constexpr (std::is_same_v<T, std::string>) {
                if (k) gram += ' ';
                gram += items[i + k];
            } else {
                gram += items[i + k];
            }
        }
        if (!seen.insert(std::move(gram)).second) ++dup;
    }
    return static_cast<double>(dup) / static_cast<double>(windows);
}

template double repetition_ratio<std::string>(const std::vector<std::string>&, std::size_t);
template double repetition_ratio<std::u32string>(const std::vector<std::u32string>&, std::size_t);

namespace {

double char_repetition(const std::u32string& cps, std::size_t n) {
    std::vector<std::u32string> chars;
    chars.reserve(cps.size());
    for (char32_t c : cps) chars.emplace_back(1, c);
    return repetition_ratio(chars, n);
}

void check_min(FilterVerdict& v, const char* code, double observed, double cutoff) {
    if (observed < cutoff) v.reasons.push_back({code, observed, cutoff});
}

void check_max(FilterVerdict& v, const char* code, double observed, double cutoff) {
    if (observed > cutoff) v.reasons.push_back({code, observed, cutoff});
}

}  // namespace

TextMetrics text_metrics(std::string_view raw, const WordLists& lists, const FilterModels& models,
                         const TextFilterParams& params) {
    const std::string normalized = text::nfc(raw);
    const auto toks = text::tokens(normalized);
    if (toks.empty()) throw Error("text_metrics: empty text");
    const std::u32string cps = text::to_u32(normalized);

    TextMetrics m;
    m.word_count = static_cast<double>(toks.size());
    m.char_repetition_ratio = char_repetition(cps, static_cast<std::size_t>(params.char_ngram));
    m.word_repetition_ratio = repetition_ratio(toks, static_cast<std::size_t>(params.word_ngram));

    std::size_t special = 0, punct = 0;
    for (char32_t c : cps) {
        if (!text::is_alnum(c) && !text::is_space(c)) ++special;
        if (text::is_punct(c)) ++punct;
    }
    const auto total_chars = static_cast<double>(cps.size());
    m.special_char_ratio = static_cast<double>(special) / total_chars;
    m.punctuation_ratio = static_cast<double>(punct) / total_chars;

    std::size_t stop = 0, flagged = 0, spam = 0, common = 0;
    for (const auto& t : toks) {
        const auto w = text::normalize_word(t);
        if (w.empty()) continue;
        stop += lists.stop.count(w);
        flagged += lists.flagged.count(w);
        spam += lists.spam.count(w);
        common += lists.common.count(w);
    }
    const auto n = static_cast<double>(toks.size());
    m.stop_word_ratio = static_cast<double>(stop) / n;
    m.flagged_word_ratio = static_cast<double>(flagged) / n;
    m.spam_word_ratio = static_cast<double>(spam) / n;
    m.common_word_ratio = static_cast<double>(common) / n;

    if (models.language) m.lang_id_score = models.language->score_for(normalized, params.language);
    if (models.lm) m.perplexity = models.lm->perplexity(normalized);
    return m;
}

FilterVerdict check_cutoffs(const TextMetrics& m, const TextCutoffs& c) {
    FilterVerdict v;
    check_min(v, "MinWords", m.word_count, c.min_words);
    check_max(v, "MaxWords", m.word_count, c.max_words);
    check_max(v, "CharRepetition", m.char_repetition_ratio, c.max_char_repetition_ratio);
    check_max(v, "WordRepetition", m.word_repetition_ratio, c.max_word_repetition_ratio);
    check_max(v, "SpecialChars", m.special_char_ratio, c.max_special_char_ratio);
    check_min(v, "StopWords", m.stop_word_ratio, c.min_stop_word_ratio);
    check_max(v, "FlaggedWords", m.flagged_word_ratio, c.max_flagged_word_ratio);
    check_min(v, "Punctuation", m.punctuation_ratio, c.min_punctuation_ratio);
    check_max(v, "SpamWords", m.spam_word_ratio, c.max_spam_word_ratio);
    check_min(v, "CommonWords", m.common_word_ratio, c.min_common_word_ratio);
    if (m.lang_id_score) check_min(v, "LangId", *m.lang_id_score, c.min_lang_id_score);
    if (m.perplexity) check_max(v, "Perplexity", *m.perplexity, c.max_perplexity);
    return v;
}

FilterVerdict filter_paragraph(std::string_view text, const TextFilterParams& params, const WordLists& lists,
                               const FilterModels& models) {
    if (text::trim(text).empty()) return FilterVerdict{{{"MinWords", 0, params.paragraph.min_words}}};
    return check_cutoffs(text_metrics(text, lists, models, params), params.paragraph);
}

FilterVerdict filter_image(const ImageSegment& seg, const ImageFilterParams& p) {
    if (!seg.attached()) throw Error("filter_image: no metadata attached for " + seg.src_url);
    FilterVerdict v;
    if (!p.formats.count(*seg.format)) v.reasons.push_back({"Format", 0, 0});
    const int w = *seg.width, h = *seg.height;
    if (std::min(w, h) < p.min_side) v.reasons.push_back({"TooSmall", static_cast<double>(std::min(w, h)), double(p.min_side)});
    if (std::max(w, h) > p.max_side) v.reasons.push_back({"TooLarge", static_cast<double>(std::max(w, h)), double(p.max_side)});
    const double aspect = static_cast<double>(w) / static_cast<double>(h);
    if (aspect < p.min_aspect) v.reasons.push_back({"Aspect", aspect, p.min_aspect});
    if (aspect > p.max_aspect) v.reasons.push_back({"Aspect", aspect, p.max_aspect});
    for (const auto& s : p.banned_substrings) {
        if (text::contains_icase(seg.src_url, s)) {
            v.reasons.push_back({"BannedSubstring", 0, 0});
            break;
        }
    }
    return v;
}

NodeFilterResult filter_nodes(MultimodalDocument doc, const TextFilterParams& text_params,
                              const ImageFilterParams& image_params, const WordLists& lists,
                              const FilterModels& models) {
    NodeFilterResult r;
    auto tally = [&r](const FilterVerdict& v) {
        for (const auto& reason : v.reasons) ++r.reasons[reason.code];
    };
    for (auto& seg : doc.segments) {
        auto* t = std::get_if<TextSegment>(&seg);
        if (!t) continue;
        std::string kept;
        for (const auto& para : text::paragraphs(t->body)) {
            if (para == kEndOfDocumentToken) {  // a marker, not prose
                if (!kept.empty()) kept += '\n';
                kept += para;
                continue;
            }
            auto v = filter_paragraph(para, text_params, lists, models);
            if (v.accepted()) {
                if (!kept.empty()) kept += '\n';
                kept += para;
            } else {
                ++r.paragraphs_removed;
                tally(v);
            }
        }
        t->body = std::move(kept);
    }
    r.images_removed = remove_images(doc, [&](const ImageSegment& img) {
        auto v = filter_image(img, image_params);
        tally(v);
        return !v.accepted();
    });
    doc.segments = normalize_segments(std::move(doc.segments));
    r.document = std::move(doc);
    return r;
}

FilterVerdict filter_document_level(const MultimodalDocument& doc, const TextFilterParams& text_params,
                                    const ImageFilterParams& image_params, const WordLists& lists,
                                    const FilterModels& models) {
    FilterVerdict v;
    const auto images = static_cast<double>(doc.image_count());
    if (doc.image_count() < image_params.min_images_per_doc)
        v.reasons.push_back({"NoImages", images, static_cast<double>(image_params.min_images_per_doc)});
    if (doc.image_count() > image_params.max_images_per_doc)
        v.reasons.push_back({"TooManyImages", images, static_cast<double>(image_params.max_images_per_doc)});
    const std::string joined = doc.text();
    if (text::trim(joined).empty()) {
        v.reasons.push_back({"MinWords", 0, text_params.document.min_words});
        return v;
    }
    auto text_verdict = check_cutoffs(text_metrics(joined, lists, models, text_params), text_params.document);
    v.reasons.insert(v.reasons.end(), text_verdict.reasons.begin(), text_verdict.reasons.end());
    return v;
}

DocumentFilterResult filter_document(MultimodalDocument doc, const TextFilterParams& text_params,
                                     const ImageFilterParams& image_params, const WordLists& lists,
                                     const FilterModels& models) {
    DocumentFilterResult r;
    r.nodes = filter_nodes(std::move(doc), text_params, image_params, lists, models);
    r.verdict = filter_document_level(r.nodes.document, text_params, image_params, lists, models);
    return r;
}

}  // namespace mmweb

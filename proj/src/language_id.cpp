#include "mmweb/language_id.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "language_profiles.hpp"
#include "mmweb/text.hpp"

namespace mmweb {

namespace {

// Lowercased letters with every run of non-letters collapsed to one space,
// padded with a space at both ends.
std::u32string letters_only(std::string_view text) {
    std::u32string cps = text::to_u32(text::lower(text));
    std::u32string out = U" ";
    for (char32_t cp : cps) {
        const bool letter = text::is_alnum(cp) && !(cp >= U'0' && cp <= U'9');
        if (letter) {
            out.push_back(cp);
        } else if (out.back() != U' ') {
            out.push_back(U' ');
        }
    }
    if (out.back() != U' ') out.push_back(U' ');
    return out;
}

template <typename Fn>
void for_each_ngram(const std::u32string& s, Fn&& fn) {
    for (int n = 1; n <= CharNgramLanguageId::kMaxOrder; ++n) {
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            std::u32string_view g(s.data() + i, static_cast<std::size_t>(n));
            if (n == 1 && g[0] == U' ') continue;
            fn(n - 1, text::to_utf8(g));
        }
    }
}

}  // namespace

LanguageId LanguageIdentifier::detect(std::string_view text) const {
    return scores(text).front();
}

double LanguageIdentifier::score_for(std::string_view text, std::string_view label) const {
    for (const auto& s : scores(text)) {
        if (s.label == label) return s.score;
    }
    return 0.0;
}

const CharNgramLanguageId& CharNgramLanguageId::builtin() {
    static const CharNgramLanguageId model = [] {
        std::vector<std::pair<std::string, std::string>> samples;
        for (const auto& [label, body] : detail::builtin_language_profiles())
            samples.emplace_back(std::string(label), std::string(body));
        return train(samples);
    }();
    return model;
}

CharNgramLanguageId CharNgramLanguageId::train(const std::vector<std::pair<std::string, std::string>>& samples,
                                               double alpha) {
    if (samples.empty()) throw Error("language model needs at least one profile");
    CharNgramLanguageId model;
    model.alpha_ = alpha;
    std::array<std::unordered_set<std::string>, kMaxOrder> vocab;
    for (const auto& [label, body] : samples) {
        auto it = std::find_if(model.profiles_.begin(), model.profiles_.end(),
                               [&](const Profile& p) { return p.label == label; });
        if (it == model.profiles_.end()) {
            model.profiles_.push_back(Profile{label, {}, {}});
            it = std::prev(model.profiles_.end());
        }
        Profile& profile = *it;
        for_each_ngram(letters_only(body), [&](int order, std::string gram) {
            profile.counts[order][gram] += 1.0;
            profile.totals[order] += 1.0;
            vocab[order].insert(std::move(gram));
        });
    }
    for (int n = 0; n < kMaxOrder; ++n) model.vocab_sizes_[n] = static_cast<double>(vocab[n].size()) + 1.0;
    std::sort(model.profiles_.begin(), model.profiles_.end(),
              [](const Profile& a, const Profile& b) { return a.label < b.label; });
    return model;
}

std::vector<LanguageId> CharNgramLanguageId::scores(std::string_view text) const {
    if (text::trim(text).empty()) throw Error("empty input");
    const std::u32string norm = letters_only(text);
    std::vector<double> loglik(profiles_.size(), 0.0);
    for_each_ngram(norm, [&](int order, const std::string& gram) {
        for (std::size_t p = 0; p < profiles_.size(); ++p) {
            const Profile& prof = profiles_[p];
            auto it = prof.counts[order].find(gram);
            const double c = it == prof.counts[order].end() ? 0.0 : it->second;
            loglik[p] += std::log((c + alpha_) / (prof.totals[order] + alpha_ * vocab_sizes_[order]));
        }
    });
    const double max = *std::max_element(loglik.begin(), loglik.end());
    double z = 0.0;
    for (double& l : loglik) {
        l = std::exp(l - max);
        z += l;
    }
    std::vector<LanguageId> out;
    out.reserve(profiles_.size());
    for (std::size_t p = 0; p < profiles_.size(); ++p) out.push_back({profiles_[p].label, loglik[p] / z});
    std::stable_sort(out.begin(), out.end(), [](const LanguageId& a, const LanguageId& b) { return a.score > b.score; });
    return out;
}

std::vector<std::string> CharNgramLanguageId::labels() const {
    std::vector<std::string> out;
    for (const auto& p : profiles_) out.push_back(p.label);
    return out;
}

}  // namespace mmweb

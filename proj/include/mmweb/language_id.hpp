#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mmweb {

struct LanguageId {
    std::string label;  // ISO-639-1
    double score = 0.0;  // posterior probability in [0, 1]
};

/// Pluggable language scorer. Implementations must be deterministic and safe
/// for concurrent calls.
class LanguageIdentifier {
public:
    virtual ~LanguageIdentifier() = default;

    /// Posterior over all known labels, highest first (ties by label).
    /// Throws Error("empty input") on whitespace-only text.
    virtual std::vector<LanguageId> scores(std::string_view text) const = 0;

    LanguageId detect(std::string_view text) const;
    double score_for(std::string_view text, std::string_view label) const;
};

/// Multinomial naive Bayes over character 1..3-grams.
class CharNgramLanguageId final : public LanguageIdentifier {
public:
    static constexpr int kMaxOrder = 3;

    /// en, fr, de, es profiles trained from embedded text.
    static const CharNgramLanguageId& builtin();

    static CharNgramLanguageId train(const std::vector<std::pair<std::string, std::string>>& samples,
                                     double alpha = 0.5);

    std::vector<LanguageId> scores(std::string_view text) const override;
    std::vector<std::string> labels() const;

private:
    struct Profile {
        std::string label;
        std::array<std::unordered_map<std::string, double>, kMaxOrder> counts;
        std::array<double, kMaxOrder> totals{};
    };

    std::vector<Profile> profiles_;
    std::array<double, kMaxOrder> vocab_sizes_{};
    double alpha_ = 0.5;
};

}  // namespace mmweb

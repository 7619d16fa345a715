#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mmweb {

struct NGramOptions {
    int order = 5;
    /// Additive (Lidstone) constant applied at every order.
    double additive = 0.1;
    /// Interpolation weight per order, index 0 = unigram. Empty means defaults.
    std::vector<double> interpolation;
    /// Training words seen fewer times than this map to <unk>.
    int min_count = 2;
};

/// Interpolated additive-smoothing n-gram model over whitespace tokens.
///
/// P_0(w) is uniform over V = vocabulary + <unk>. For k = 1..order, when the
/// (k-1)-token context h has been seen,
///   P_k(w|h) = l_k (c(hw) + d) / (c(h) + d |V|) + (1 - l_k) P_{k-1}(w|h')
/// and otherwise P_k = P_{k-1}. Every level sums to one over V and stays
/// strictly positive. Histories are left-padded with <s>.
class NGramLM {
public:
    static NGramLM train(std::span<const std::string> corpus, const NGramOptions& options = {});

    int order() const { return order_; }
    /// Number of predictable symbols, including <unk>.
    std::size_t vocabulary_size() const { return words_.size() - 1; }
    /// Predictable words; index 0 is "<unk>".
    std::vector<std::string> vocabulary() const;

    /// P(word | context); only the last order-1 context tokens matter.
    double probability(std::span<const std::string> context, std::string_view word) const;
    /// Natural-log probability of every token of `text`.
    std::vector<double> token_log_probs(std::string_view text) const;
    /// exp(-mean log P). Throws Error when `text` has no tokens.
    double perplexity(std::string_view text) const;

    std::string serialize() const;
    static NGramLM deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static NGramLM load(const std::filesystem::path& path);

private:
    using Key = std::string;  // packed little-endian uint32 ids

    std::uint32_t id_of(std::string_view word) const;
    double probability_ids(std::span<const std::uint32_t> history, std::uint32_t word) const;
    void rebuild_contexts();

    int order_ = 0;
    double additive_ = 0.1;
    std::vector<double> lambdas_;
    int min_count_ = 2;
    std::vector<std::string> words_;  // id -> word; 0 = <unk>, 1 = <s>
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::unordered_map<Key, std::uint64_t>> grams_;     // [k-1]: k-gram counts
    std::vector<std::unordered_map<Key, std::uint64_t>> contexts_;  // [k-1]: (k-1)-gram context totals
    std::uint64_t total_tokens_ = 0;
};

}  // namespace mmweb

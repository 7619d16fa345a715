#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmweb {

inline constexpr std::size_t kMinHashSlots = 16;
using MinHashSignature = std::array<std::uint64_t, kMinHashSlots>;

struct MinHashOptions {
    int shingle_size = 5;
    std::uint64_t seed = 0x6d696e68617368ULL;
    int bands = 4;
    int rows = 4;  // bands * rows must equal kMinHashSlots
    double threshold = 0.8;
    bool operator==(const MinHashOptions&) const = default;
};

/// Word n-grams joined by a single space. A text with fewer than `n` tokens
/// yields one shingle made of all its tokens; an empty text yields none.
std::vector<std::string> word_shingles(std::string_view text, int n);

/// Throws Error on a text without tokens.
MinHashSignature minhash_signature(std::string_view text, const MinHashOptions& options = {});

/// Fraction of equal slots.
double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b);

/// LSH banding proposes candidate pairs; pairs whose estimated similarity
/// reaches the threshold are joined into clusters, and the earliest member
/// of each cluster survives. Returns surviving indices in increasing order.
std::vector<std::size_t> dedup_minhash(std::span<const MinHashSignature> signatures,
                                       const MinHashOptions& options = {});

}  // namespace mmweb
